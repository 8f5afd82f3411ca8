#pragma once

#include "rzlab/grid.hpp"
#include "rzlab/potentials.hpp"
#include "rzlab/semigroup.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rzlab {

/// Everything a run depends on. Serializable to flat JSON (see report.hpp).
struct RunConfig {
  std::string suite = "core";
  std::vector<std::string> checks;  ///< explicit ids; overrides suite when non-empty
  int d = 2;
  int n = 16;
  double R = 4.0;
  std::string potential = "harmonic";
  std::vector<double> p = {1.0, 1.25, 1.5, 2.0};
  std::uint64_t seed = 1;
  int trials = 64;             ///< random band-limited trial fields (8 structured ones are added)
  double split_tau0 = 0.01;    ///< splitting step for DOMINATION
  double frac_tau0 = 0.00125;  ///< splitting step inside fractional-power quadrature
  double quad_tol = 1e-6;      ///< scalar-identity tolerance of the time quadrature
  long fk_paths = 20000;
  int fk_slices = 256;
  int jobs = 1;
  std::string out;             ///< output directory ("" = none)
};

enum class Comparison {
  AtMost,   ///< value <= bound + slack
  AtLeast,  ///< value >= bound - slack
  Within,   ///< |value - bound| <= slack
  Info,     ///< reported, no verdict
};

enum class Slack { Absolute, Relative };

struct Measurement {
  std::string name;
  double p = 0.0;  ///< 0 when the measurement has no exponent
  double value = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::AtMost;
  Slack slack = Slack::Absolute;

  double allowed_slack() const;
  bool passes() const;
  /// Violation in units of the slack; <= 1 passes. Info measurements give -inf.
  double score() const;
};

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct CheckReport {
  std::string id;
  int d = 0;
  int n = 0;
  double R = 0.0;
  std::string potential;
  std::vector<double> p;
  std::uint64_t seed = 0;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
  bool inconclusive = false;  ///< a fit failed its quality threshold
  Verdict verdict = Verdict::Pass;
  double runtime_s = 0.0;

  /// The measurement with the largest score (the one the CSV row shows).
  const Measurement& headline() const;
  void finalize();
};

const std::vector<std::string>& known_checks();
std::vector<std::string> suite_checks(const std::string& suite);

/// Potentials exercised for a dimension: zero, const:2, harmonic, ce1:0.25 (d >= 2), ce2:4, ce3.
std::vector<std::string> catalog(int d);

/// Deterministic per-check seed: FNV-1a over (suite seed, check id).
std::uint64_t derive_seed(std::uint64_t seed, const std::string& id);

/// random_count band-limited mean-zero fields (|k_i| <= n/4, no zero mode) followed by
/// 8 structured fields. With mean_zero every field has its mean removed.
std::vector<Field> trial_family(const GridSpec& grid, std::uint64_t seed, int random_count, bool mean_zero);

/// Dense operators shared between checks, keyed by grid and potential tag.
std::shared_ptr<const DenseOperator> cached_dense(const GridSpec& grid, const Potential& V);
void clear_dense_cache();

CheckReport run_check(const std::string& id, const RunConfig& config);
std::vector<CheckReport> run_suite(const RunConfig& config);

/// Exit status contract: true iff every report passed.
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace rzlab
