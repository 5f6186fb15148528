#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/measures.hpp"
#include "gibbslab/potentials.hpp"
#include "gibbslab/reference.hpp"

namespace gibbslab {

/// Extended-real value with named components. `finite` is false iff the
/// value is +inf; `diverged` then names the component that blew up.
struct FunctionalValue {
  double value = 0.0;
  bool finite = true;
  std::map<std::string, double> breakdown;
  std::string diverged;
  std::vector<std::string> warnings;

  static FunctionalValue from(double v);
};

nlohmann::json to_json(const FunctionalValue& v);

namespace functionals {

/// (1/n) sum V(x_i) + (1/2n^2) sum_{i != j} W(x_i, x_j), the pair sum over
/// distinct particle indices.
double hamiltonian(const ParticleConfig& config, const PotentialPair& pair);

/// int V dmu.
double confinement_energy(const DiscreteMeasure& mu, const PotentialPair& pair);

/// (1/2) sum_{i,j} w_i w_j W(a_i, a_j), diagonal included.
double interaction_energy(const DiscreteMeasure& mu, const InteractionFn& w);

/// Same double sum with the diagonal atom terms removed (W vanishes on x = y).
double interaction_energy_offdiag(const DiscreteMeasure& mu, const InteractionFn& w);

/// Mass of mu (x) mu on the diagonal, sum_i w_i^2.
double diagonal_mass(const DiscreteMeasure& mu);

struct TruncatedInteraction {
  double full = 0.0;     // W replaced by min(W, M)
  double offdiag = 0.0;  // same, diagonal removed
};
TruncatedInteraction truncated_interaction(const DiscreteMeasure& mu, const InteractionFn& w, double cap);

/// R(mu | nu) = sum mu_i log(mu_i / nu_i) when supp mu is inside supp nu,
/// +inf otherwise.
double relative_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// The probability measure e^{-V} l / int e^{-V} dl on a finite reference,
/// with the pre-normalization mass.
struct GibbsReference {
  DiscreteMeasure measure;
  double mass = 1.0;
};
GibbsReference gibbs_reference(const PotentialPair& pair, const ReferenceMeasure& ell);

/// I(mu) = R(mu | e^{-V} l) + W(mu). The reference e^{-V} l is normalized;
/// a warning is attached if its mass differs from 1 by more than 1e-10.
FunctionalValue rate_I(const DiscreteMeasure& mu, const PotentialPair& pair, const ReferenceMeasure& ell);

/// J(mu) = (1/2) sum w_i w_j (V(a_i) + V(a_j) + W(a_i, a_j)), evaluated both
/// as that quadratic form and as int V dmu + W(mu); the two are cross-checked.
FunctionalValue rate_J(const DiscreteMeasure& mu, const PotentialPair& pair);

/// (1 - n/beta_n) int V dmu + W_offdiag(mu).
FunctionalValue rate_J_n_offdiag(const DiscreteMeasure& mu, const PotentialPair& pair, std::size_t n,
                                 double beta_n);

struct CoupledEnergy {
  double frak_w = 0.0;  // (1/2) int W dzeta
  double frak_j = 0.0;  // (1/2) int (V(x) + V(y) + W(x, y)) dzeta
};
/// zeta lives on R^d x R^d: each atom is (x, y) concatenated, dim 2d.
CoupledEnergy coupled_energy(const DiscreteMeasure& zeta, const PotentialPair& pair);

/// mu (x) nu on R^{d1 + d2}.
DiscreteMeasure product_measure(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// (1/2) int W dzeta + R(zeta | g (x) g), g = e^{-V} l normalized; the
/// right-hand side of the superlinear tightness inequality for one coupling.
double coupled_free_energy(const DiscreteMeasure& zeta, const PotentialPair& pair,
                           const ReferenceMeasure& ell);

/// values[at] - min(values). Throws if every value is +inf.
double star_gap(const std::vector<FunctionalValue>& values, std::size_t at);

}  // namespace functionals
}  // namespace gibbslab
