# %% [markdown]
# # kam-criteria Demo
#
# This notebook walks through one desk-scale run on the golden mean:
#
# 1. **Arithmetic** - convergents, ||q_i alpha|| and the kappa index windows
# 2. **Window solve** - the (p_M, q_M) Birkhoff minimizer and its circle graph
# 3. **Chords** - Type-II chords at one kappa and their length distortion
# 4. **Criteria** - the full pipeline, envelopes and the R / S / T conditions

# %% [markdown]
# ## 1. Environment Setup

# %%
import os
import sys

# Add src to path for local development
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))

import numpy as np

from kam_criteria.chords import enumerate_type2, kappa_context
from kam_criteria.config import check_feasibility, preset_config
from kam_criteria.distortion import K0
from kam_criteria.number_theory import cf_table, kappa_windows
from kam_criteria.pipeline import run_criteria
from kam_criteria.report import summary_lines
from kam_criteria.variational import graph_extract, minimal_window

print("kam-criteria Demo")
print("=" * 50)

# %% [markdown]
# ## 2. Arithmetic of the Rotation Number
#
# The golden mean has all partial quotients 1, so A = 1 and gamma0 = 3.
# Each dyadic scale kappa picks a convergent index n_kappa, and the chord
# families at kappa live between N-tilde = n_kappa - 1 and N-bar = n_kappa + 6.

# %%
config = preset_config("golden_small")
alpha, kappa_range, n_bar = check_feasibility(config)

for row in cf_table(alpha)[:12]:
    print(f"q_{row['i']:<2} = {row['q']:>6}   ||q alpha|| = {row['norm']:.4e}")

for kappa in range(kappa_range[0], kappa_range[1] + 1):
    print(f"kappa = {kappa}: {kappa_windows(alpha, kappa)}")

# %% [markdown]
# ## 3. Window Solve
#
# The periodic minimizer of period q_M stands in for the invariant circle.
# Its ordered orbit, read as a graph over the circle, should be close to the
# rigid rotation for a weak potential.

# %%
twist = config.build_twist(alpha)
window = minimal_window(twist, alpha, config.M, n_bar_max=n_bar)
graph = graph_extract(window)

print(f"(p, q) = ({window.p}, {window.q}), residual = {window.residual:.2e}")
print(f"graph variation = {graph.graph_variation:.3e}, Holder exponent = {graph.holder.exponent:.2f}")

for theta, y in graph.points()[:: window.q // 12]:
    print(f"theta = {theta:.6f}   y - p/q = {y - window.p / window.q:+.3e}")

# %% [markdown]
# ## 4. Type-II Chords and Length Distortion
#
# K0(j | v) = log(Theta(F^j v) / Theta(v)) measures how much the map stretches
# a chord along its orbit. On the rigid rotation it vanishes identically.

# %%
kappa = kappa_range[0]
ctx = kappa_context(alpha, kappa)
chords = enumerate_type2(window, kappa, budget=8, seed=0)
print(f"kappa = {kappa}: {len(chords)} chords, canonical step q_{ctx.n_kappa} = {ctx.q_n}")

shifts = np.arange(-alpha.q[ctx.n_bar], alpha.q[ctx.n_bar] + 1, 7)
print(f"{'chord':>16} {'max |K0|':>12} {'Theta / lambda':>15}")
for v in chords[:4]:
    k0 = max(abs(K0(int(j), v)) for j in shifts)
    print(f"{str((v.i, v.j)):>16} {k0:>12.3e} {v.Theta / v.lam:>15.6f}")

# %% [markdown]
# ## 5. Criterion Pipeline
#
# run_criteria repeats the window solve, tabulates every kappa cell and
# evaluates the envelopes. The summary prints the verdict per criterion and
# the R / S / T conditions per kappa.

# %%
record = run_criteria(config)
print("\n".join(summary_lines(record)))

# %% [markdown]
# ## Summary
#
# For a weak potential Lambda_II stays close to one and the K0-tilde envelope
# stays small across kappa. Raising the amplitude (see scripts/run_sweep.py)
# shows how the envelopes respond as the perturbation grows.
