"""Exact number-field arithmetic: towers, automorphisms, embeddings.

All construction-side arithmetic is exact (rational coordinates over a
fixed basis); floating point only enters through .embed().
"""

from fractions import Fraction

from relaystc import cyclotomic5_field, golden_field, silver_field

Kg = golden_field()
Ks = silver_field()
Km = cyclotomic5_field()

print("== the three towers")
for f in (Ks, Kg, Km):
    print(f"  {f.name}: degree {f.degree}, basis {f.basis_labels}, "
          f"automorphisms {sorted(f.automorphisms)}")

print("\n== golden-ratio element omega = (1 + sqrt5)/2")
omega = Kg.element([Fraction(1, 2), 0, Fraction(1, 2), 0])
print("  omega        =", omega)
print("  sigma(omega) =", omega.apply("sigma"), " (the conjugate root)")
print("  omega * sigma(omega) =", omega * omega.apply("sigma"), " (norm, exactly -1)")
print("  embed(omega) =", omega.embed())

print("\n== fifth root of unity, power-basis reduction")
z = Km.basis_element(1)
z4 = z * z * z * z
print("  zeta^4 =", z4, " (reduced via the minimal polynomial)")
print("  zeta^4 * zeta =", z4 * z, " (back to 1)")
print("  sigma: zeta ->", z.apply("sigma"), "; applying sigma twice =", z.apply("sigma").apply("sigma"))
print("  conjugation agrees:", z.conjugate() == z.apply("sigma").apply("sigma"))

print("\n== silver tower: sigma fixes the quadratic subfield spanned by i*sqrt7")
i_s7 = Ks.basis_element(3)
print("  sigma(i*sqrt7) =", i_s7.apply("sigma"))
print("  sigma(i) =", Ks.gaussian(1j).apply("sigma"), ", sigma(sqrt7) =", Ks.basis_element(2).apply("sigma"))
