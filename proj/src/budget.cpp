#include "budget.hpp"

#include <utility>

#include "error.hpp"

namespace sqz {

void DetectionChain::validate() const {
  require(visibility >= 0 && visibility <= 1, "detection.visibility must lie in [0, 1]");
  require(eta_prop > 0 && eta_prop <= 1, "detection.eta_prop must lie in (0, 1]");
  require(eta_pd > 0 && eta_pd <= 1, "detection.eta_pd must lie in (0, 1]");
  require(visibility > 0, "detection.visibility of 0 gives zero detection efficiency");
}

double eta_det(const DetectionChain& chain) {
  chain.validate();
  return chain.visibility * chain.visibility * chain.eta_prop * chain.eta_pd;
}

double eta_total(const DetectionChain& chain, const CavityRates& rates) { return eta_det(chain) * rates.eta_esc; }

BudgetReport budget_report(const DetectionChain& chain, const CavityRates& rates,
                           const std::optional<QuadraturePair>& measured) {
  chain.validate();
  BudgetReport report;
  const std::pair<const char*, double> stages[] = {
      {"escape", rates.eta_esc},
      {"mode_matching", chain.visibility * chain.visibility},
      {"propagation", chain.eta_prop},
      {"photodiode", chain.eta_pd},
  };
  double running = 1.0;
  for (const auto& [name, t] : stages) {
    running *= t;
    report.stages.push_back({name, t, running});
  }
  report.modeled_eta_total = running;
  if (measured) {
    const auto inferred = infer_from_pair(measured->sqz_db, measured->antisqz_db);
    report.inferred_eta_total = inferred.eta_total;
    report.residual = inferred.eta_total / running;
  }
  return report;
}

}  // namespace sqz
