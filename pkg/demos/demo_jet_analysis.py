"""Formal integrability of polynomial PDE systems: symbol dimensions,
Cartan characters, the involutivity test, and the closed prolongation
formula, run over the bundled systems including the full plasma model.
"""

from crystaljet.corpus import metric_flow_system, mhd_system
from crystaljet.data import data_path
from crystaljet.jets import (
    cartan_distribution_dimension,
    formal_integrability_check,
    load_system,
    prolongation_dimension_formula,
    symbol_report,
    verify_polynomial_solution,
)

print("Dimension chains at generic points (exact rational sampling):")
for name, base_dim in [("continuity_e1.pde", 6), ("pressure_e2.pde", 7),
                       ("table4_component.pde", 5), ("heat.pde", 5),
                       ("uxx_uyy.pde", 5)]:
    system = load_system(str(data_path(name)))
    rep = symbol_report(system)
    verdict = formal_integrability_check(system)
    closed = prolongation_dimension_formula(base_dim, rep.characters, 1)
    print(f"  {system.name:18s} dim E = {rep.dim_e:2d}, symbol filtration {rep.g_dims},"
          f" dim E+1 = {rep.dim_e_plus_1:2d} (closed form {closed}),"
          f" verdict {'PASS' if verdict.passed else 'FAIL'}")

print("\nPolynomial sections can be verified exactly, symbolic constants")
print("included:")
heat = load_system(str(data_path("heat.pde")))
for section in ({"u": "a*x + b"}, {"u": "x^2"}):
    residuals = verify_polynomial_solution(heat, section)
    txt = ", ".join(r.render(heat.independent, heat.dependent) for r in residuals)
    print(f"  u = {section['u']}: residual {txt}")

print("\nThe full 17-equation plasma system (16 fields over space-time):")
mhd = mhd_system()
print(f"  interior Cartan distribution dimension: {cartan_distribution_dimension(mhd)}")
boundary = mhd_system(boundary=True)
print(f"  wall (no energy production) dimension:  {cartan_distribution_dimension(boundary)}")

print("\nCurvature flow of a 3-metric, determinant-cleared: the flat metric")
print("is a steady solution.")
flow = metric_flow_system()
flat = {"g11": "1", "g22": "1", "g33": "1", "g12": "0", "g13": "0", "g23": "0"}
residuals = verify_polynomial_solution(flow, flat)
print(f"  all {len(residuals)} residuals vanish: {all(r.is_zero() for r in residuals)}")
