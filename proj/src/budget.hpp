#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavity.hpp"
#include "opo.hpp"

namespace sqz {

/// Homodyne detection chain. Fringe visibility enters the efficiency
/// squared (mode overlap of field amplitudes): eta_det = V^2 * eta_prop * eta_pd.
struct DetectionChain {
  double visibility = 1;
  double eta_prop = 1;
  double eta_pd = 1;

  void validate() const;
};

double eta_det(const DetectionChain& chain);
double eta_total(const DetectionChain& chain, const CavityRates& rates);

struct BudgetStage {
  std::string name;
  double transmission = 1;
  double cumulative = 1;  // running product up to and including this stage
};

struct BudgetReport {
  std::vector<BudgetStage> stages;
  double modeled_eta_total = 1;
  std::optional<double> inferred_eta_total;
  // inferred / modeled; > 1 means the measurement saw less loss than modeled.
  std::optional<double> residual;
};

BudgetReport budget_report(const DetectionChain& chain, const CavityRates& rates,
                           const std::optional<QuadraturePair>& measured = std::nullopt);

}  // namespace sqz
