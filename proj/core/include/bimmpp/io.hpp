#pragma once

#include <string>
#include <vector>

#include "bimmpp/fit.hpp"
#include "bimmpp/reliability.hpp"

namespace bimmpp {

// Incremental JSON emitter with caller-controlled key order. All doubles are
// written with 17 significant digits so parsing them back is lossless.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(long long v);
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(unsigned long long v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<bool> first_; // per nesting level
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

// Keys are emitted in alphabetical order in every object so byte comparison
// of outputs is meaningful.
std::string to_json(const ModelParams& params);
std::string to_json(const MomentSet& ms);
std::string to_json(const FitResult& fit);
std::string to_json(const ReliabilityReport& report);

ModelParams params_from_json(const std::string& text);
std::vector<ReliabilityQuery> queries_from_json(const std::string& text);

// Accepted ABC draws as CSV with header lambda3,omega3,distance.
std::string accepted_draws_csv(const FitResult& fit);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content digest, 16 hex digits; used in run manifests.
std::string fnv1a64_hex(const std::string& content);

std::string library_version();

} // namespace bimmpp
