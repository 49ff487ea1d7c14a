"""
A single chaotic neuron
=======================

A feature value, scaled to [0, 1], is the *stimulus* of a neuron whose
activity follows the skew tent map.  Starting from ``q`` the neuron fires
until its activity comes within ``eps_stim`` of the stimulus.  The mean of
that firing trace is the extra feature handed to the regressor.
"""

import numpy as np

from ncr.chaos import ChaosParams, augment, generate_trace, skew_tent_step, tracemean

# The map stretches [0, b) and folds [b, 1] back onto [0, 1].
for x in (0.0, 0.2495, 0.499, 0.75, 1.0):
    print(f"T({x}) = {skew_tent_step(x):.4f}")

# One neuron, stimulus 0.9, started at q = 0.11 with a neighbourhood of 0.21.
params = ChaosParams(q=0.11, eps_stim=0.21)
trace = generate_trace(0.9, params)
print("\ntrace:", np.round(trace.values, 4))
print("stopped by:", trace.terminated_by.value, "after", len(trace.values), "values")
print("tracemean:", round(tracemean(trace), 4))

# A narrow neighbourhood needs a longer orbit before the neuron stops.
for eps in (0.2, 0.05, 0.01, 0.001, 0.0001):
    t = generate_trace(0.37, ChaosParams(q=0.11, eps_stim=eps))
    print(f"eps_stim={eps:<6} trace length {len(t.values):4d}  tracemean {tracemean(t):.4f}")

# Augmentation applies one neuron per cell and appends the tracemeans:
# an m x n matrix becomes m x 2n, the left block untouched.
Z = np.array([[0.05, 0.5], [0.3, 0.95], [0.8, 0.2]])
print("\naugmented features:\n", np.round(augment(Z, ChaosParams(q=0.34, eps_stim=0.18)), 4))
