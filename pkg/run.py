"""Quick test script for weyl_eulerian."""

from weyl_eulerian import polynomial_model
from weyl_eulerian.core import derham_report

report = derham_report(polynomial_model(2), (-4, 2), verbose=1)
print(report.verdict)
for nu, degree, dim in report.entries():
    print(f"H^{nu}(d; R)_{degree} = {dim}")
