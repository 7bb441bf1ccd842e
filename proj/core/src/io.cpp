#include "bimmpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bimmpp {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    first_.pop_back();
    out_ += '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    first_.pop_back();
    out_ += ']';
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separate();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separate();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    separate();
    out_ += '"';
    out_ += json_escape(v);
    out_ += '"';
    return *this;
}

void JsonWriter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
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

namespace {

void emit_vector(JsonWriter& w, const Vector& v) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
}

void emit_params(JsonWriter& w, const ModelParams& p) {
    w.begin_object();
    w.key("a").value(p.a);
    w.key("b").value(p.b);
    w.key("lambda").begin_array();
    for (double x : p.lambda) w.value(x);
    w.end_array();
    w.key("omega").begin_array();
    for (double x : p.omega) w.value(x);
    w.end_array();
    w.end_object();
}

void emit_moment_set(JsonWriter& w, const MomentSet& ms) {
    w.begin_object();
    w.key("corr_tk").value(ms.corr_tk);
    w.key("eta11").value(ms.eta11);
    w.key("eta12").value(ms.eta12);
    w.key("eta21").value(ms.eta21);
    w.key("mu_k").begin_array();
    for (double x : ms.mu_k) w.value(x);
    w.end_array();
    w.key("mu_t").begin_array();
    for (double x : ms.mu_t) w.value(x);
    w.end_array();
    w.key("rho_k1").value(ms.rho_k1);
    if (ms.rho_k_degenerate) w.key("rho_k_degenerate").value(true);
    w.key("rho_t1").value(ms.rho_t1);
    if (ms.rho_t_degenerate) w.key("rho_t_degenerate").value(true);
    w.end_object();
}

const char* kind_name(QueryKind kind) {
    switch (kind) {
        case QueryKind::CondProbTGivenK: return "cond_prob_T_given_K";
        case QueryKind::ExpectedNT: return "expected_NT";
        case QueryKind::ExpectedJointIncrement: return "expected_joint_increment";
        case QueryKind::PmfNT: return "pmf_NT";
        case QueryKind::PmfNK: return "pmf_NK";
        case QueryKind::JointNoFailure: return "joint_no_failure";
    }
    return "";
}

QueryKind kind_from_name(const std::string& name) {
    for (QueryKind k :
         {QueryKind::CondProbTGivenK, QueryKind::ExpectedNT,
          QueryKind::ExpectedJointIncrement, QueryKind::PmfNT, QueryKind::PmfNK,
          QueryKind::JointNoFailure}) {
        if (name == kind_name(k)) return k;
    }
    throw BadFormat("queries JSON: unknown kind \"" + name + "\"");
}

} // namespace

std::string to_json(const ModelParams& params) {
    JsonWriter w;
    emit_params(w, params);
    return w.str();
}

std::string to_json(const MomentSet& ms) {
    JsonWriter w;
    emit_moment_set(w, ms);
    return w.str();
}

std::string to_json(const FitResult& fit) {
    JsonWriter w;
    w.begin_object();
    w.key("accepted_count")
        .value(static_cast<long long>(fit.accepted_draws.size()));
    w.key("delta0").value(fit.step1.objective);
    w.key("params");
    emit_params(w, fit.params);
    w.key("step1").begin_object();
    w.key("a").value(fit.step1.a);
    w.key("b").value(fit.step1.b);
    w.key("gamma_k1").value(fit.step1.gamma_k1);
    w.key("gamma_k2").value(fit.step1.gamma_k2);
    w.key("gamma_t1").value(fit.step1.gamma_t1);
    w.key("gamma_t2").value(fit.step1.gamma_t2);
    w.key("objective").value(fit.step1.objective);
    w.key("restarts_used").value(fit.step1.restarts_used);
    w.end_object();
    w.key("target_moments");
    emit_moment_set(w, fit.target_moments);
    w.end_object();
    return w.str();
}

std::string to_json(const ReliabilityReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("n_per_rep").value(static_cast<unsigned long long>(report.n_per_rep));
    w.key("replications").value(report.replications);
    w.key("results").begin_array();
    for (const auto& res : report.results) {
        w.begin_object();
        w.key("cells").begin_array();
        for (const auto& cell : res.cells) {
            w.begin_object();
            w.key("estimate").value(cell.estimate);
            if (cell.future_window) w.key("future_window").value(true);
            if (cell.k) w.key("k").value(*cell.k);
            if (cell.n) w.key("n").value(static_cast<long long>(*cell.n));
            w.key("standard_error").value(cell.standard_error);
            if (cell.t) w.key("t").value(*cell.t);
            w.end_object();
        }
        w.end_array();
        w.key("query").begin_object();
        w.key("dk").value(res.query.dk);
        w.key("dt").value(res.query.dt);
        w.key("k");
        emit_vector(w, res.query.k);
        w.key("kind").value(kind_name(res.query.kind));
        w.key("n").begin_array();
        for (long n : res.query.n) w.value(static_cast<long long>(n));
        w.end_array();
        w.key("t");
        emit_vector(w, res.query.t);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw BadFormat(std::string(what) + ": " + e.what());
    }
}

double number_field(const json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_number())
        throw BadFormat(std::string(what) + ": missing numeric field \"" + key + "\"");
    return j[key].get<double>();
}

std::array<double, 3> triple_field(const json& j, const char* key, const char* what) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3)
        throw BadFormat(std::string(what) + ": field \"" + key +
                        "\" must be an array of 3 numbers");
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (!j[key][i].is_number())
            throw BadFormat(std::string(what) + ": field \"" + key +
                            "\" must be an array of 3 numbers");
        out[i] = j[key][i].get<double>();
    }
    return out;
}

} // namespace

ModelParams params_from_json(const std::string& text) {
    const json j = parse_or_throw(text, "params JSON");
    if (!j.is_object()) throw BadFormat("params JSON: root must be an object");
    ModelParams p;
    p.a = number_field(j, "a", "params JSON");
    p.b = number_field(j, "b", "params JSON");
    p.lambda = triple_field(j, "lambda", "params JSON");
    p.omega = triple_field(j, "omega", "params JSON");
    return validate(p);
}

std::vector<ReliabilityQuery> queries_from_json(const std::string& text) {
    const json root = parse_or_throw(text, "queries JSON");
    if (!root.is_array()) throw BadFormat("queries JSON: root must be an array");
    std::vector<ReliabilityQuery> out;
    for (const auto& j : root) {
        if (!j.is_object()) throw BadFormat("queries JSON: each query must be an object");
        ReliabilityQuery q;
        bool have_kind = false;
        for (const auto& [key, val] : j.items()) {
            if (key == "kind") {
                if (!val.is_string())
                    throw BadFormat("queries JSON: \"kind\" must be a string");
                q.kind = kind_from_name(val.get<std::string>());
                have_kind = true;
            } else if (key == "t" || key == "k") {
                if (!val.is_array())
                    throw BadFormat("queries JSON: \"" + key + "\" must be an array");
                Vector& dst = key == "t" ? q.t : q.k;
                for (const auto& x : val) {
                    if (!x.is_number())
                        throw BadFormat("queries JSON: \"" + key +
                                        "\" must contain numbers");
                    dst.push_back(x.get<double>());
                }
            } else if (key == "n") {
                if (!val.is_array())
                    throw BadFormat("queries JSON: \"n\" must be an array");
                for (const auto& x : val) {
                    if (!x.is_number_integer())
                        throw BadFormat("queries JSON: \"n\" must contain integers");
                    q.n.push_back(x.get<long>());
                }
            } else if (key == "dt" || key == "dk") {
                if (!val.is_number())
                    throw BadFormat("queries JSON: \"" + key + "\" must be a number");
                (key == "dt" ? q.dt : q.dk) = val.get<double>();
            } else {
                throw BadFormat("queries JSON: unknown field \"" + key + "\"");
            }
        }
        if (!have_kind) throw BadFormat("queries JSON: every query needs a \"kind\"");
        out.push_back(std::move(q));
    }
    return out;
}

std::string accepted_draws_csv(const FitResult& fit) {
    std::string out = "lambda3,omega3,distance\n";
    for (const auto& d : fit.accepted_draws) {
        out += format_double(d.lambda3);
        out += ',';
        out += format_double(d.omega3);
        out += ',';
        out += format_double(d.distance);
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadFormat("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw BadFormat("cannot read file: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadFormat("cannot open file for writing: " + path);
    out << content;
    out.close();
    if (!out) throw BadFormat("cannot write file: " + path);
}

std::string fnv1a64_hex(const std::string& content) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string library_version() {
#ifdef BIMMPP_VERSION
    return BIMMPP_VERSION;
#else
    return "0.0.0";
#endif
}

} // namespace bimmpp
