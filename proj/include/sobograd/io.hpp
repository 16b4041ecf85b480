#pragma once

#include <map>
#include <string>

#include "sobograd/descent.hpp"

namespace sobograd {

// ---- FieldSnapshot ("SGF1") ---------------------------------------------
// Little-endian binary: magic "SGF1", u32 version=1, u32 rank, u32 component
// count, per-axis u64 dims, per-axis f64 lengths, per-axis f64 origins, then
// per component row-major interleaved (re, im) f64 pairs, trailing CRC32 of
// everything after the magic.

void write_snapshot(const std::string& path, const std::vector<ComplexField>& components);
std::vector<ComplexField> read_snapshot(const std::string& path);

// ---- RunConfig -------------------------------------------------------------
// Sectioned key/value document ([grid], [problem], [method], [output]).  A
// JSON document with the same sections (as written into report.json) is
// accepted interchangeably.

class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_ini(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    void set_double(const std::string& section, const std::string& key, double value);
    void set_long(const std::string& section, const std::string& key, long value);
    void set_bool(const std::string& section, const std::string& key, bool value);

    /// Throws if any stored key was never read nor written by the consumer.
    void reject_unknown_keys() const;

    std::string to_ini() const;
    std::string to_json() const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::map<std::string, std::map<std::string, bool>> touched_;
};

// ---- run outputs -------------------------------------------------------------

/// trace.csv with header iter,energy,residual,norm,mu,wall_ms.  The norm
/// column is the total squared L2 norm over components.  When deterministic
/// is set, wall_ms is written as 0 so reruns are byte-identical.
void write_trace_csv(const std::string& path, const ConvergenceReport& rep,
                     bool deterministic);

/// report.json: convergence metadata plus the fully resolved configuration.
void write_report_json(const std::string& path, const ConvergenceReport& rep,
                       const RunConfig& resolved);

}  // namespace sobograd
