#pragma once

#include <filesystem>
#include <string>

#include "flatlab/budget.hpp"
#include "flatlab/convergence.hpp"

namespace flatlab {

/// Minimal JSON writer with numbers printed at 17 significant digits, so that
/// doubles round-trip bit-faithfully and artifacts are byte-stable.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(long long v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    const std::string& str() const { return out_; }

  private:
    void separator();
    std::string out_;
    std::string stack_;  // 'o' = fresh object, 'O' = object with entries, same for arrays
    bool after_key_ = false;
};

std::string format_double(double v);

// --- artifact schemas ---------------------------------------------------
// net/1     {schema, m, eps, seed, count, centers: [[...]]}
// threads/1 {schema, net, rho, endpoints: [{i, j, q}], pairs: [{i, j, length}]}
// profile/1 {schema, m, rho0, rho, length, l_prime, neck_length, min_radius,
//            samples: [[s, t, r, r1, r2]]}
// budget/1  {schema, eps, count, k, per_step: [...], total_df, total_dgh,
//            fitted_constants: {c1, c2, c3}}
// report/1  {schema, m, sample_size, schedule, per_eps: [...]}

std::string net_to_json(const Net& net);
Net net_from_json(const std::string& text);

std::string threads_to_json(const ThreadSystem& ts);
ThreadSystem threads_from_json(const std::string& text);

std::string profile_to_json(const TunnelProfile& profile);
TunnelProfile profile_from_json(const std::string& text);

std::string budget_to_json(const IteratedBudget& budget);
std::string single_budget_to_json(const FillingBudget& budget);

std::string report_to_json(const ConvergenceReport& report);
std::string report_to_csv(const ConvergenceReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace flatlab
