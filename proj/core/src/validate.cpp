#include "dimcut/validate.hpp"

#include <algorithm>
#include <stdexcept>

#include "dimcut/io.hpp"
#include "dimcut/rng.hpp"

namespace dimcut {

ValidationRun run_validation(const ValidationOptions& options) {
  if (options.n_cases < 1) throw std::invalid_argument("n_cases must be positive");
  Rng rng(options.seed);
  ValidationRun run;
  run.cases.reserve(options.n_cases);
  run.verdict = true;
  for (std::size_t i = 0; i < options.n_cases; ++i) {
    ValidationCase c;
    c.acc_fs = rng.uniform(0.6, 0.99);
    c.acc_fe = std::clamp(c.acc_fs + rng.uniform(-0.2, 0.2), 0.6, 0.99);
    const double w = rng.uniform();
    c.w_interp = options.fixed_interp_weight.value_or(w);
    c.w_integ = 1.0 - c.w_interp;
    const Decision d = decide(c.acc_fs, c.acc_fe, c.w_interp, c.w_integ);
    c.interpret_s = d.interpretability_score;
    c.integ_s = d.integrity_score;
    c.label = d.method;

    const bool selection = c.w_interp * c.acc_fs >= c.w_integ * c.acc_fe;
    if (selection != (c.label == Method::Selection)) run.verdict = false;
    (c.label == Method::Selection ? run.n_selection : run.n_extraction) += 1;
    run.cases.push_back(c);
  }
  return run;
}

std::string format_scatter_csv(const ValidationRun& run) {
  std::string out = "interpret_s,integ_s,label\n";
  for (const auto& c : run.cases) {
    out += format_double(c.interpret_s) + ',' + format_double(c.integ_s) + ',' +
           std::string(to_string(c.label)) + '\n';
  }
  return out;
}

std::string format_validation_summary(const ValidationRun& run) {
  return std::to_string(run.cases.size()) + ", " + std::to_string(run.n_selection) + ", " +
         std::to_string(run.n_extraction) + ", " + (run.verdict ? "true" : "false");
}

}  // namespace dimcut
