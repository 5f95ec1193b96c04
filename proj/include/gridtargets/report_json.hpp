#pragma once

#include "gridtargets/dirichlet.hpp"
#include "gridtargets/measure.hpp"
#include "gridtargets/types.hpp"

#include <string>
#include <vector>

namespace gridtargets {

/// Deterministic JSON emission: fixed field order, floats printed with 17
/// significant digits so values round-trip exactly.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key = "");
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    /// Emit a pre-formatted JSON token (e.g. a number already printed with
    /// format_double) in value position.
    JsonWriter& raw(const std::string& token);

    template <class T>
    JsonWriter& field(const std::string& name, const T& v) {
        key(name);
        return value(v);
    }

    const std::string& str() const { return out_; }

  private:
    void separator();
    std::string out_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;
};

std::string format_double(double v);
std::string json_escape(const std::string& s);

/// {"op": ..., "params": {...}, "value": v, "stderr": s, "samples": N, "seed": u}
std::string mc_estimate_json(const std::string& op, const McEstimate& est,
                             const std::vector<std::pair<std::string, std::string>>& params);

std::string scan_result_json(const ScanResult& scan, const std::string& profile_spec, int m,
                             int n);

std::string phi_report_json(const PhiReport& report);

std::string eah_report_json(const EahReport& report, const EahConfig& cfg, int m, int n);

}  // namespace gridtargets
