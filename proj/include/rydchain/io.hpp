// io.hpp
// CSV output, run manifests, and the (N, fidelity) CSV reader.
//
// Doubles are written in shortest round-trip form (std::to_chars); lines end in LF.

#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "montecarlo.hpp"
#include "protocols.hpp"

namespace rydchain {

inline constexpr const char* artifact_version = "0.1.0";

inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    return detail::format_double(v);
}

inline const char* sweep_csv_header = "protocol,N,v0_over_omega,disorder,realizations,mean_fidelity,std_error,min,max";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << sweep_csv_header << '\n';
    for (const SweepRecord& r : records)
        os << r.protocol << ',' << r.n_sites << ',' << fmt(r.v0_over_omega) << ',' << r.disorder << ','
           << r.realizations << ',' << fmt(r.mean_fidelity) << ',' << fmt(r.std_error) << ',' << fmt(r.min) << ','
           << fmt(r.max) << '\n';
}

// One row per realization: protocol,N,v0_over_omega,disorder,realization,fidelity
inline void write_raw_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "protocol,N,v0_over_omega,disorder,realization,fidelity\n";
    for (const SweepRecord& r : records)
        for (std::size_t i = 0; i < r.raw.size(); ++i)
            os << r.protocol << ',' << r.n_sites << ',' << fmt(r.v0_over_omega) << ',' << r.disorder << ',' << i
               << ',' << fmt(r.raw[i]) << '\n';
}

// Plain "key=value" lines, in insertion order.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::uint64_t master_seed = 0;
    std::string timestamp;

    void set(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

    std::string text() const {
        std::ostringstream os;
        os << "command=" << command << '\n';
        for (const auto& [k, v] : params) os << k << '=' << v << '\n';
        os << "master_seed=" << master_seed << '\n';
        os << "artifact_version=" << artifact_version << '\n';
        os << "timestamp=" << timestamp << '\n';
        return os.str();
    }
};

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string manifest_path_for(const std::string& csv_path) { return csv_path + ".manifest"; }

// Manifest first, then the CSV body.
inline void write_with_manifest(const std::string& csv_path, const RunManifest& manifest, const std::string& body) {
    {
        std::ofstream m(manifest_path_for(csv_path), std::ios::binary);
        if (!m) throw Error(ErrorKind::Usage, "cannot write " + manifest_path_for(csv_path));
        m << manifest.text();
    }
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Usage, "cannot write " + csv_path);
    f << body;
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (std::string& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}
} // namespace detail

// (N, fidelity) pairs. Either two bare numeric columns, or a header naming an "N"
// column and a "fidelity" or "mean_fidelity" column. Blank and '#' lines are skipped.
inline std::vector<std::pair<double, double>> read_fit_csv(std::istream& is) {
    std::vector<std::pair<double, double>> pts;
    std::string line;
    int line_no = 0;
    int col_n = 0, col_f = 1;
    bool first = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        const auto cells = detail::split_csv_line(line);
        if (first) {
            first = false;
            double probe = 0.0;
            const auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), probe);
            if (r.ec != std::errc() || r.ptr != cells[0].data() + cells[0].size()) {
                col_n = col_f = -1;
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (cells[i] == "N") col_n = static_cast<int>(i);
                    if (cells[i] == "fidelity" || cells[i] == "mean_fidelity") col_f = static_cast<int>(i);
                }
                if (col_n < 0 || col_f < 0)
                    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                                      ": header needs an N column and a fidelity column");
                continue;
            }
        }
        const auto need = static_cast<std::size_t>(std::max(col_n, col_f)) + 1;
        if (cells.size() < need)
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected at least " +
                                              std::to_string(need) + " columns");
        pts.emplace_back(detail::parse_double(cells[static_cast<std::size_t>(col_n)], line_no),
                         detail::parse_double(cells[static_cast<std::size_t>(col_f)], line_no));
    }
    return pts;
}

} // namespace rydchain
