#include "gridtargets/report_json.hpp"

#include <cmath>
#include <cstdio>

namespace gridtargets {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";  // IEEE inf round-trips via overflow
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!needs_comma_.empty()) {
        if (needs_comma_.back()) out_ += ',';
        needs_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += '{';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& name) {
    if (!name.empty()) key(name);
    separator();
    out_ += '[';
    needs_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    needs_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    separator();
    out_ += '"';
    out_ += json_escape(name);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ += '"';
    out_ += json_escape(v);
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& token) {
    separator();
    out_ += token;
    return *this;
}

std::string mc_estimate_json(const std::string& op, const McEstimate& est,
                             const std::vector<std::pair<std::string, std::string>>& params) {
    JsonWriter w;
    w.begin_object();
    w.field("op", op);
    w.key("params").begin_object();
    for (const auto& [k, v] : params) {
        w.key(k);
        w.raw(v);
    }
    w.end_object();
    w.field("value", est.value);
    w.field("stderr", est.stderr_);
    w.field("samples", est.samples);
    w.field("seed", est.seed);
    w.end_object();
    return w.str();
}

std::string scan_result_json(const ScanResult& scan, const std::string& profile_spec, int m,
                             int n) {
    JsonWriter w;
    w.begin_object();
    w.field("op", "test");
    w.key("params").begin_object();
    w.field("m", m);
    w.field("n", n);
    w.field("profile", profile_spec);
    w.end_object();
    w.field("T_lo", static_cast<std::int64_t>(scan.T_lo));
    w.field("T_hi", static_cast<std::int64_t>(scan.T_hi));
    w.field("dirichlet_up_to", scan.dirichlet_up_to);
    w.field("recent_failures", static_cast<std::int64_t>(scan.recent_failures()));
    w.begin_array("failures");
    for (long T : scan.failures) w.value(static_cast<std::int64_t>(T));
    w.end_array();
    w.end_object();
    return w.str();
}

std::string phi_report_json(const PhiReport& report) {
    JsonWriter w;
    w.begin_object();
    w.field("op", "phi");
    w.key("params").begin_object();
    w.field("r", report.r);
    w.field("z", report.z);
    w.end_object();
    w.field("value", report.estimate.value);
    w.field("stderr", report.estimate.stderr_);
    w.field("samples", report.estimate.samples);
    w.field("seed", report.estimate.seed);
    w.key("checks").begin_object();
    w.field("athreya_bound", report.athreya);
    w.field("below_athreya", report.below_athreya);
    w.field("raw_lower", report.raw_lower);
    w.field("raw_upper", report.raw_upper);
    w.field("within_raw_bounds", report.within_raw_bounds);
    w.field("renorm_lower", report.renorm_lower);
    w.field("renorm_upper", report.renorm_upper);
    w.field("within_renorm_bounds", report.within_renorm_bounds);
    w.field("total_measure", report.total_measure);
    w.end_object();
    w.end_object();
    return w.str();
}

std::string eah_report_json(const EahReport& report, const EahConfig& cfg, int m, int n) {
    JsonWriter w;
    w.begin_object();
    w.field("op", "eah");
    w.key("params").begin_object();
    w.field("m", m);
    w.field("n", n);
    w.field("N_max", static_cast<std::int64_t>(cfg.N_max));
    w.end_object();
    w.field("member_up_to_N", report.member_up_to_N);
    w.begin_array("failures");
    for (long N : report.failures) w.value(static_cast<std::int64_t>(N));
    w.end_array();
    w.begin_array("reduction_mismatches");
    for (long N : report.reduction_mismatches) w.value(static_cast<std::int64_t>(N));
    w.end_array();
    w.begin_array("dyadic_partials");
    for (const auto& p : report.dyadic_partials) {
        w.begin_object();
        w.field("j", static_cast<std::int64_t>(p.index));
        w.field("term", p.term);
        w.field("partial", p.partial);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

}  // namespace gridtargets
