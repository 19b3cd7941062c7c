#pragma once

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "contour.hpp"
#include "explicit.hpp"
#include "numsys.hpp"
#include "zeros.hpp"

namespace beurling {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

/// Shortest round-trip decimal form.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

struct ProvenanceInfo {
    std::string config_hash = "0000000000000000";
    std::uint64_t seed = 0;
};

inline std::string timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Header line carried by every artifact; the timestamp sits on its own line so reruns compare equal without it.
inline std::string provenance_line(const ProvenanceInfo& p) {
    return std::string("# beurling ") + kToolVersion + " config_hash=" + p.config_hash + " seed=" + std::to_string(p.seed);
}

inline nlohmann::ordered_json provenance_json(const ProvenanceInfo& p) {
    return {{"tool", "beurling"}, {"version", kToolVersion}, {"config_hash", p.config_hash}, {"seed", p.seed},
            {"timestamp", timestamp_now()}};
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180; comment lines start with '#').

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const ProvenanceInfo& prov, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary), columns_(columns.size()) {
        if (!out_) throw ResourceError("cannot open " + path.string() + " for writing", 0);
        out_ << provenance_line(prov) << "\r\n# timestamp=" << timestamp_now() << "\r\n";
        row(columns);
    }
    void comment(const std::string& text) { out_ << "# " << text << "\r\n"; }
    void row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_) throw DomainError("csv row width mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_field(fields[i]);
        }
        out_ << "\r\n";
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ConfigError("csv column '" + name + "' missing");
    }
};

inline std::vector<std::string> split_csv_record(const std::string& text, std::size_t& pos) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cur += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
            ++pos;
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            break;
        } else {
            cur += c;
        }
        ++pos;
    }
    fields.push_back(cur);
    return fields;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CsvTable t;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == '#') {
            std::size_t end = text.find_first_of("\r\n", pos);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(pos, end - pos);
            t.comments.push_back(line.size() >= 2 ? line.substr(2) : std::string());
            pos = end;
            while (pos < text.size() && (text[pos] == '\r' || text[pos] == '\n')) ++pos;
            continue;
        }
        auto rec = split_csv_record(text, pos);
        if (rec.size() == 1 && rec[0].empty()) continue;
        if (t.header.empty()) {
            t.header = std::move(rec);
        } else {
            if (rec.size() != t.header.size()) throw ConfigError(path.string() + ": ragged csv row");
            t.rows.push_back(std::move(rec));
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Zero lists: rows are zeros, certificates and nudges ride along as comment lines.

inline void write_zero_list_csv(const std::filesystem::path& path, const ZeroList& zl, const ProvenanceInfo& prov) {
    CsvWriter w(path, prov, {"beta", "gamma", "multiplicity", "box_w", "box_h"});
    for (const auto& c : zl.certificates) {
        w.comment("certificate " + fmt(c.rect.sigma_lo) + " " + fmt(c.rect.sigma_hi) + " " + fmt(c.rect.t_lo) + " " +
                  fmt(c.rect.t_hi) + " " + std::to_string(c.count));
    }
    for (const auto& n : zl.nudges) w.comment("nudge " + fmt(n.where.real()) + " " + fmt(n.where.imag()) + " " + fmt(n.offset));
    for (const auto& z : zl.zeros) {
        w.row({fmt(z.beta), fmt(z.gamma), std::to_string(z.multiplicity), fmt(z.box.width()), fmt(z.box.height())});
    }
}

inline ZeroList read_zero_list_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    ZeroList zl;
    for (const auto& c : t.comments) {
        std::istringstream is(c);
        std::string tag;
        is >> tag;
        if (tag == "certificate") {
            std::string a, b, cc, d;
            long n = 0;
            is >> a >> b >> cc >> d >> n;
            if (!is) throw ConfigError(path.string() + ": malformed certificate line");
            zl.certificates.push_back({{parse_double(a), parse_double(b), parse_double(cc), parse_double(d)}, n});
        } else if (tag == "nudge") {
            std::string a, b, cc;
            is >> a >> b >> cc;
            zl.nudges.push_back({{parse_double(a), parse_double(b)}, parse_double(cc)});
        }
    }
    const std::size_t ib = t.column("beta"), ig = t.column("gamma"), im = t.column("multiplicity"), iw = t.column("box_w"),
                      ih = t.column("box_h");
    for (const auto& r : t.rows) {
        Zero z;
        z.beta = parse_double(r[ib]);
        z.gamma = parse_double(r[ig]);
        z.multiplicity = std::stoi(r[im]);
        const double w = parse_double(r[iw]), h = parse_double(r[ih]);
        z.box = {z.beta - 0.5 * w, z.beta + 0.5 * w, z.gamma - 0.5 * h, z.gamma + 0.5 * h};
        zl.zeros.push_back(z);
    }
    zl.seal();
    return zl;
}

// ---------------------------------------------------------------------------
// Paths as JSON {b, theta, a_plus_kappa, translates[], t_seq[], sigma_seq[]}.

inline nlohmann::ordered_json path_to_json(const GammaPath& g) {
    return {{"b", g.b},
            {"theta", g.theta},
            {"a_plus_kappa", g.a_plus_kappa},
            {"translates", g.translates.shifts},
            {"t_seq", g.t_seq},
            {"sigma_seq", g.sigma_seq}};
}

inline GammaPath path_from_json(const nlohmann::json& j) {
    GammaPath g;
    try {
        g.b = j.at("b").get<double>();
        g.theta = j.at("theta").get<double>();
        g.a_plus_kappa = j.at("a_plus_kappa").get<double>();
        g.translates = TranslateSet::make(j.at("translates").get<std::vector<double>>());
        g.t_seq = j.at("t_seq").get<std::vector<double>>();
        g.sigma_seq = j.at("sigma_seq").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("path file: ") + e.what());
    }
    if (g.t_seq.size() < 2 || g.sigma_seq.size() != g.t_seq.size() || g.t_seq.front() != 0.0) {
        throw ConfigError("path file: t_seq and sigma_seq must have equal length >= 2 starting at t_0 = 0");
    }
    g.height = g.t_seq.back();
    return g;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open " + path.string() + " for writing", 0);
    out << j.dump(2) << "\n";
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Element-table cache: raw little-endian doubles keyed by the system descriptor hash.

inline void save_table(const std::filesystem::path& path, const ElementTable& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return;
    const double cutoff = t.cutoff_x();
    const std::uint64_t n = t.size();
    out.write(reinterpret_cast<const char*>(&cutoff), sizeof cutoff);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(t.norms().data()), static_cast<std::streamsize>(n * sizeof(double)));
    out.write(reinterpret_cast<const char*>(t.lambda().data()), static_cast<std::streamsize>(n * sizeof(double)));
}

inline std::optional<ElementTable> load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    double cutoff = 0.0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&cutoff), sizeof cutoff);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || n > static_cast<std::uint64_t>(kMaxTableEntries)) return std::nullopt;
    std::vector<double> norms(n), lambda(n);
    in.read(reinterpret_cast<char*>(norms.data()), static_cast<std::streamsize>(n * sizeof(double)));
    in.read(reinterpret_cast<char*>(lambda.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) return std::nullopt;
    return ElementTable(cutoff, std::move(norms), std::move(lambda));
}

// ---------------------------------------------------------------------------
// Tidy plot data.

enum class PlotKind { Deviation, Bounds, Zeros };

inline PlotKind plot_kind_from_string(const std::string& s) {
    if (s == "deviation") return PlotKind::Deviation;
    if (s == "bounds") return PlotKind::Bounds;
    if (s == "zeros") return PlotKind::Zeros;
    throw ConfigError("unknown plot kind '" + s + "' (expected deviation, bounds or zeros)");
}

inline std::vector<std::string> plot_columns(PlotKind k) {
    switch (k) {
        case PlotKind::Deviation: return {"x", "T", "deviation", "envelope"};
        case PlotKind::Bounds: return {"case", "sigma", "t", "outcome"};
        case PlotKind::Zeros: return {"beta", "gamma", "multiplicity"};
    }
    return {};
}

/// Projects a report artifact onto the long-format columns of the requested kind.
inline void emit_plot_data(const std::filesystem::path& artifact, PlotKind kind, const std::filesystem::path& out,
                           const ProvenanceInfo& prov) {
    const CsvTable t = read_csv(artifact);
    const auto cols = plot_columns(kind);
    std::vector<std::size_t> idx;
    for (const auto& c : cols) {
        bool found = false;
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (t.header[i] == c) {
                idx.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("artifact " + artifact.string() + " is not of the requested kind (no column '" + c + "')");
    }
    CsvWriter w(out, prov, cols);
    for (const auto& r : t.rows) {
        std::vector<std::string> f;
        for (std::size_t i : idx) f.push_back(r[i]);
        w.row(f);
    }
}

}  // namespace beurling
