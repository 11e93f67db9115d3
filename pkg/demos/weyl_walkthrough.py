"""Quantized observables on a lattice interval reproduce the Weyl algebra.

Run with ``python3 demos/weyl_walkthrough.py``.
"""

from discquant.discrete_model import PairedSpace, build_model
from discquant.quantize import (
    SymTruncation,
    WeylAlgebra,
    classical_limit,
    h0,
    phi,
    phi_certificate,
    verify_commutator,
)

V = PairedSpace.symplectic()
model = build_model(V, -1, 2)
print("sites", model.sites, "bar sites", model.bar_sites)

H = h0(SymTruncation(model, 3))
print("H^0 rank", H.rank, "free", H.result.is_free)
print("basis", H.names)

v, w = H.generator((1, 0)), H.generator((0, 1))
print("[v][w] =", (v * w).to_json())
print("[w][v] =", (w * v).to_json())
print("commutator", verify_commutator((1, 0), (0, 1), H))

W = WeylAlgebra(V.c)
x = W.mul(W.gen(1), W.gen(0))  # w.v in normal form: v.w - h
print("w.v ->", W.to_json(x))
print("phi(w.v) =", phi(x, H).to_json())
print("classical limit", classical_limit(phi(x, H)))
print("phi certificate", phi_certificate(H))
