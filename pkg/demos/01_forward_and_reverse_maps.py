#!/usr/bin/env python3
"""Forward and reverse hyperparameter maps for the three prior families.

The forward direction answers: given K component priors in a mixture model,
which prior on the single-component model makes the two prior structures
coherent?  The answer is always the normalized product of the component
densities, which stays inside the family with hyperparameters given in
closed form.
"""

import mixprior as mp

# --- normal components, possibly heterogeneous --------------------------------
# the nested mean is the precision-weighted mean, the nested variance the
# K-th of the harmonic mean of the component variances
m1, v1 = mp.coherent_normal_forward([(0.0, 1.0), (4.0, 3.0)])
print(f"normals (0,1) and (4,3)      ->  nested N(m={m1}, v={v1})")

# same map in the precision parametrization: precisions simply add up
m1, p1 = mp.coherent_normal_prec_forward([(0.0, 2.0), (0.0, 2.0), (0.0, 2.0)])
print(f"three precision-2 normals    ->  nested precision {p1}")

# --- inverse gamma: shapes add up and grow with K, scales combine harmonically
a1, b1 = mp.coherent_invgamma_forward([(1.5, 2.0), (2.5, 4.0)])
print(f"inverse gammas               ->  nested IG(a={a1}, b={b1:.4f})")

# --- gamma: the product can fail to be normalizable when shapes are small -----
a1, b1 = mp.coherent_gamma_forward([(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)])
print(f"gammas (2,1),(2,2),(2,3)     ->  nested G(a={a1}, b={b1})")
try:
    mp.coherent_gamma_forward([(0.5, 1.0)] * 3)
except mp.FeasibilityError as err:
    print(f"gammas with small shapes     ->  {err}")

# --- the reverse direction needs equal components ------------------------------
# start from the nested prior and recover the K identical component priors
print()
print("reverse maps from a nested prior:")
print("  N(0, 0.5), K=2   ->", mp.reverse_equal_normal(0.0, 0.5, 2, "variance"))
print("  IG(8, 1/3), K=3  ->", mp.reverse_equal_invgamma(8.0, 1.0 / 3.0, 3))
print("  G(3, 2),  K=4    ->", mp.reverse_equal_gamma(3.0, 2.0, 4))

# the inverse gamma reverse map is gated: the nested shape must exceed K - 1,
# so the largest K has to be fixed before choosing the nested prior
verdict = mp.feasible_k_range(3.0, 2, 4)
print(f"  IG shape 3 over K in [2,4]: feasible={verdict.feasible}, "
      f"infeasible K={list(verdict.infeasible_ks)}")

# gamma priors have no such gate: any positive nested shape works for every K
groups = mp.coherent_family([mp.Gamma(0.1, 5.0)], ks=range(2, 8))
print(f"  G(0.1, 5) expands for K={sorted(groups)} without restrictions")

# everything round-trips: expanding and multiplying back reproduces the input
nested = mp.NormalVar(0.3, 2.0)
for k, (group,) in sorted(mp.coherent_family([nested], ks={2, 4, 8}).items()):
    print(f"  K={k}: product of the expansion ->", mp.coherent_product(group.components))
