"""Spectral determinant and Casimir energy from closed forms and from the zeta integral.

    python3 demos/determinant_check.py
"""
from quantum_circulant import (
    MetricGraph,
    determinant_closed_form,
    determinant_numeric,
    vacuum_energy,
    validate_spec,
)

cases = {
    "C5(1,2) equal lengths": MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.0]),
    "C5(1,2) lengths 1, 1.05": MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.05]),
    "C8(1,2,3) symmetric": MetricGraph.symmetric(validate_spec(8, [1, 2, 3]), [1.0, 1.2, 1.45]),
    "C7(1,3) random lengths": MetricGraph.random_generic(validate_spec(7, [1, 3]), seed=4),
}
header = ("graph", "closed form", "exp(-zeta'(0))", "rel diff", "E_c")
print("{:26s} {:>18s} {:>18s} {:>9s} {:>12s}".format(*header))
for name, g in cases.items():
    closed = determinant_closed_form(g).value
    numeric = determinant_numeric(g).value
    print(f"{name:26s} {closed:18.10g} {numeric:18.10g} {abs(numeric / closed - 1):9.1e} {vacuum_energy(g):12.8f}")
