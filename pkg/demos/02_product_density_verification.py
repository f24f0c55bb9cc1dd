#!/usr/bin/env python3
"""Certifying the closed-form maps against two independent numeric oracles.

Nothing in the verification below trusts the forward-map algebra: the grid
oracle multiplies densities pointwise and normalizes by quadrature, and the
Monte Carlo oracle approximates the conditional distribution given that all
contrasts between components vanish.
"""

import numpy as np

import mixprior as mp

rng = np.random.default_rng(7)

# --- grid route ----------------------------------------------------------------
components = [mp.InvGamma(1.5, 2.0), mp.InvGamma(2.5, 4.0)]
claimed = mp.coherent_product(components)
report = mp.verify_product_coherence(components, claimed)
print("grid check of the inverse gamma map:")
print(mp.to_human(report))

# a deliberately wrong claim is caught with the observed sup-norm gap
wrong = mp.verify_product_coherence([mp.NormalVar(0, 1)] * 2, mp.NormalVar(0.0, 1.0))
print()
print("grid check against a deliberately wrong nested prior:")
print(mp.to_human(wrong))

# --- Monte Carlo route -----------------------------------------------------------
# draw the component vector, keep draws whose contrasts lie inside a narrow
# band, and KS-test the retained first coordinate against the claimed prior
group = mp.MixturePriorGroup(components=(mp.Gamma(2.0, 1.0),) * 2)
claimed = mp.coherent_product(group.components)
report = mp.mc_conditional_check(group, claimed, epsilon=0.02, n_draws=10**6, rng=rng)
print()
print("epsilon-band conditional check of the gamma map:")
print(mp.to_human(report))

# identical seeds reproduce the report bit for bit
again = mp.mc_conditional_check(group, claimed, epsilon=0.02, n_draws=10**6,
                                rng=np.random.default_rng(7))
differs = mp.mc_conditional_check(group, claimed, epsilon=0.02, n_draws=10**6,
                                  rng=np.random.default_rng(8))
print()
print("machine serialization, schema v1:")
print(mp.to_machine(report))
print("round-trips losslessly:", mp.from_machine(mp.to_machine(report)) == report)
print("seed 8 gives a different report:", differs != report)
