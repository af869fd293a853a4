"""A bounded area cocycle on the complex hyperbolic plane and the rotation numbers it induces on braids."""

import numpy as np

from quantrep.burau import parse_word
from quantrep.quasimorphism import burau_model, dupont_cocycle, rotation_number

model = burau_model(7)
print("indefinite Burau form at p = 7, normalized:")
print(np.round(model.H, 4))
print(f"cocycle bound: {model.bound}")

g1, g2, g3 = model.generators
print(f"\nc(g1, g2)  = {dupont_cocycle(g1, g2, model).value:+.6f}")
print(f"c(g1, g1^-1) = {dupont_cocycle(g1, np.linalg.inv(g1), model).value:+.6f}")

print("\nrotation numbers (homogeneous, conjugation invariant):")
for text in ("1.2.-3", "1.2.-3.1.2.-3", "2.1.2.-3.-2", "1.1.-2.3", "1.-2"):
    word = parse_word(text)
    rep = rotation_number(word, model)
    print(f"   {text:>16}: {rep.value:+.6f}   last delta {rep.deltas[-1]:.1e}")
