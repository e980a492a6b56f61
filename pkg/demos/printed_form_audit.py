"""Compare closed-form expressions for the caged and Painleve systems with
what the engine derives, and show how each difference is classified.

Run with ``python3 demos/printed_form_audit.py``.
"""

import json

from superalg import audit_printed_forms
from superalg.models import CagedParams, PainleveParams

report = audit_printed_forms("caged", CagedParams(kx=1, ky=2, l1=2, l2=0))
print("caged, kx=1, ky=2, l1=2")
for e in report.entries:
    extra = f"offset {e.offset:+.4g}" if e.classification == "constant_offset" else ""
    if e.classification == "uniform_scale":
        extra = f"scale {e.scale:.4g}"
    print(f"  {e.item:40s} {e.classification:16s} {extra}")
print("  patterns:", json.dumps(report.patterns, indent=None))

pain = audit_printed_forms("painleve", PainleveParams())
print("\nPainleve, default parameters")
print("  gamma scale laws:", pain.patterns["gamma_scale"])
print("  summary:", pain.counts())
print("  notes:", pain.notes)
