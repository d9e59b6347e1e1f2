"""Round-trip a state through its probability vector, then break it on purpose.

The probability vector P is a complete, redundancy-free description of the
state: rho -> P -> rho is exact.  But not every vector obeying the bounds
and the normalization constraint is a state; reconstruction reports the
physicality of what it produced instead of guessing.
"""

import numpy as np

from evspin import (
    Spin,
    PVector,
    build_quorum,
    default_config,
    expand_operator,
    expectation,
    pvec_to_rho,
    random_density_matrix,
    rho_to_pvec,
    spin_operators,
)

spin = Spin(2)  # s = 1
quorum = build_quorum(default_config(spin))
rng = np.random.default_rng(42)

print("=" * 70)
print("Round trip: random mixed state -> probabilities -> state")
print("=" * 70)
rho = random_density_matrix(spin.dim, rng)
p = rho_to_pvec(rho, quorum)
print("probabilities:", np.round(p.values, 4))
print(f"every P_n in [0, 1]: {bool(np.all((p.values >= 0) & (p.values <= 1)))}")
print(f"weighted sum e.P (equals Tr rho): {p.normalization:.15f}")
print(f"plain sum (not 1 -- incompatible measurements): {p.values.sum():.6f}")

rho_back, report = pvec_to_rho(p)
print(f"round-trip max deviation: {np.max(np.abs(rho_back - rho)):.2e}")
print(f"reconstruction physical: {report.physical} "
      f"(trace {report.trace:.12f}, min eigenvalue {report.min_eigenvalue:.2e})")

print()
print("=" * 70)
print("Expectation values straight from P (no density matrix needed)")
print("=" * 70)
ops = spin_operators(spin)
for name, op in (("sx", ops.sx), ("sy", ops.sy), ("sz", ops.sz)):
    coeffs = expand_operator(np.asarray(op), quorum)
    via_p = expectation(coeffs, p)
    via_trace = np.trace(op @ rho).real
    print(f"<{name}>  via P: {via_p:+.12f}   via Tr[A rho]: {via_trace:+.12f}   "
          f"diff {abs(via_p - via_trace):.1e}")

print()
print("=" * 70)
print("An unphysical point that satisfies all the linear constraints")
print("=" * 70)
bumped = p.values.copy()
bumped[0] += 1.2
bumped /= float(np.dot(quorum.dual_traces, bumped))  # restore e.P = 1
rho_bad, report_bad = pvec_to_rho(PVector(bumped, quorum))
print("tampered P still has e.P =", f"{report_bad.e_dot_p:.12f}")
print(f"but reconstruction has min eigenvalue {report_bad.min_eigenvalue:.4f} < 0")
print("physical:", report_bad.physical)
print("(bounds + normalization are necessary, not sufficient, for a state)")
