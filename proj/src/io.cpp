#include "sobograd/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sobograd {

namespace {

void put_bytes(std::string& buf, const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
}
template <class T>
void put(std::string& buf, T v) {
    put_bytes(buf, &v, sizeof(v));
}

class Reader {
public:
    explicit Reader(const std::string& data) : data_(data) {}
    template <class T>
    T get() {
        if (pos_ + sizeof(T) > data_.size())
            throw std::runtime_error("snapshot: truncated file");
        T v;
        std::memcpy(&v, data_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::size_t pos() const { return pos_; }

private:
    const std::string& data_;
    std::size_t pos_ = 0;
};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_snapshot(const std::string& path, const std::vector<ComplexField>& components) {
    if (components.empty()) throw std::invalid_argument("write_snapshot: no components");
    const Grid& g = *components.front().grid;
    for (const auto& c : components)
        if (!c.grid->same_layout(g))
            throw std::invalid_argument("write_snapshot: components on different grids");

    std::string payload;
    put<std::uint32_t>(payload, 1);  // version
    put<std::uint32_t>(payload, static_cast<std::uint32_t>(g.rank()));
    put<std::uint32_t>(payload, static_cast<std::uint32_t>(components.size()));
    for (int ax = 0; ax < g.rank(); ++ax)
        put<std::uint64_t>(payload, static_cast<std::uint64_t>(g.dim(ax)));
    for (int ax = 0; ax < g.rank(); ++ax) put<double>(payload, g.length(ax));
    for (int ax = 0; ax < g.rank(); ++ax) put<double>(payload, g.origin(ax));
    for (const auto& c : components)
        for (const Complex& v : c.samples) {
            put<double>(payload, v.real());
            put<double>(payload, v.imag());
        }

    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size())));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    out.write("SGF1", 4);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.write(reinterpret_cast<const char*>(&crc), sizeof(crc));
    if (!out) throw std::runtime_error("write_snapshot: write failed for " + path);
}

std::vector<ComplexField> read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    if (data.size() < 8 || data.compare(0, 4, "SGF1") != 0)
        throw std::runtime_error("read_snapshot: bad magic");

    const std::string payload = data.substr(4, data.size() - 8);
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, data.data() + data.size() - 4, 4);
    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(payload.data()),
              static_cast<uInt>(payload.size())));
    if (crc != stored_crc) throw std::runtime_error("read_snapshot: CRC mismatch");

    Reader r(payload);
    const auto version = r.get<std::uint32_t>();
    if (version != 1) throw std::runtime_error("read_snapshot: unsupported version");
    const auto rank = r.get<std::uint32_t>();
    const auto ncomp = r.get<std::uint32_t>();
    if (rank == 0 || rank > 8 || ncomp == 0 || ncomp > 16)
        throw std::runtime_error("read_snapshot: implausible header");

    std::vector<int> dims(rank);
    std::vector<double> lengths(rank), origins(rank);
    for (auto& d : dims) d = static_cast<int>(r.get<std::uint64_t>());
    for (auto& l : lengths) l = r.get<double>();
    for (auto& o : origins) o = r.get<double>();
    GridPtr grid = make_grid(dims, lengths, origins);

    std::vector<ComplexField> components;
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        ComplexField f(grid);
        for (Complex& v : f.samples) {
            const double re = r.get<double>();
            const double im = r.get<double>();
            v = Complex(re, im);
        }
        components.push_back(std::move(f));
    }
    if (r.pos() != payload.size()) throw std::runtime_error("read_snapshot: trailing bytes");
    return components;
}

// ---- RunConfig ----------------------------------------------------------------

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // report.json (or a bare JSON config): sections live under
        // "resolved_config" if present, else at top level.
        auto j = nlohmann::json::parse(text);
        if (j.contains("resolved_config")) j = j["resolved_config"];
        RunConfig cfg;
        for (const auto& [section, body] : j.items()) {
            if (!body.is_object()) continue;
            for (const auto& [key, value] : body.items())
                cfg.sections_[section][key] =
                    value.is_string() ? value.get<std::string>() : value.dump();
        }
        return cfg;
    }
    return parse_ini(text);
}

RunConfig RunConfig::parse_ini(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: bad section header at line " +
                                         std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(lineno));
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    touched_[section][key] = true;
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size())
        throw std::runtime_error("config: bad number for " + section + "." + key);
    return d;
}

long RunConfig::get_long(const std::string& section, const std::string& key,
                         long fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    std::size_t used = 0;
    const long n = std::stol(v, &used);
    if (used != v.size())
        throw std::runtime_error("config: bad integer for " + section + "." + key);
    return n;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("config: bad boolean for " + section + "." + key);
}

void RunConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
    sections_[section][key] = value;
    touched_[section][key] = true;
}

void RunConfig::set_double(const std::string& section, const std::string& key, double value) {
    set(section, key, format_double(value));
}
void RunConfig::set_long(const std::string& section, const std::string& key, long value) {
    set(section, key, std::to_string(value));
}
void RunConfig::set_bool(const std::string& section, const std::string& key, bool value) {
    set(section, key, value ? "true" : "false");
}

void RunConfig::reject_unknown_keys() const {
    for (const auto& [section, body] : sections_)
        for (const auto& [key, value] : body)
            if (!touched_.count(section) || !touched_.at(section).count(key))
                throw std::runtime_error("config: unknown key " + section + "." + key);
}

std::string RunConfig::to_ini() const {
    std::ostringstream out;
    for (const auto& [section, body] : sections_) {
        out << '[' << section << "]\n";
        for (const auto& [key, value] : body) out << key << " = " << value << '\n';
        out << '\n';
    }
    return out.str();
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    for (const auto& [section, body] : sections_)
        for (const auto& [key, value] : body) j[section][key] = value;
    return j.dump(2);
}

// ---- run outputs ----------------------------------------------------------------

void write_trace_csv(const std::string& path, const ConvergenceReport& rep,
                     bool deterministic) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
    out << "iter,energy,residual,norm,mu,wall_ms\n";
    for (const TraceRow& row : rep.trace) {
        double n = 0.0;
        for (double v : row.norms) n += v;
        out << row.iter << ',' << format_double(row.energy) << ','
            << format_double(row.residual) << ',' << format_double(n) << ','
            << format_double(row.mu) << ','
            << format_double(deterministic ? 0.0 : row.wall_ms) << '\n';
    }
}

void write_report_json(const std::string& path, const ConvergenceReport& rep,
                       const RunConfig& resolved) {
    nlohmann::json j;
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["saddle_flag"] = rep.saddle_flag;
    j["message"] = rep.message;
    j["wall_time_s"] = rep.wall_time_s;
    if (!rep.trace.empty()) {
        const TraceRow& last = rep.trace.back();
        j["final"]["energy"] = last.energy;
        j["final"]["residual"] = last.residual;
        j["final"]["mu"] = last.mu;
        j["final"]["norms"] = last.norms;
    }
    nlohmann::json cfg;
    for (const auto& [section, body] : resolved.sections())
        for (const auto& [key, value] : body) cfg[section][key] = value;
    j["resolved_config"] = cfg;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace sobograd
