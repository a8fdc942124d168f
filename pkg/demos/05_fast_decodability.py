"""Fast-decodability: certified zeros of the R factor and the decoding exponent.

The silver variants keep a certified zero block in R (decoding exponent
k' = 14 < 15), the golden lattice does not (k' = 15), and the MIDO code
shows the strongest structure (k' = 11).
"""

from relaystc import CODE_NAMES, build_lattice, fd_analyze, normalize_unit_volume

for name in CODE_NAMES:
    code = normalize_unit_volume(build_lattice(name))
    rep = fd_analyze(code, trials=100, tol=1e-9, rng_seed=0)
    print(f"== {name}")
    print(rep.mask_ascii())
    print(f"  HR-orthogonal pairs : {len(rep.hr_pairs)}")
    print(f"  decoding exponent k': {rep.complexity_exponent} "
          f"(exact HR certificate alone gives {rep.exact_exponent})")
    print(f"  fast-decodable      : {rep.fast_decodable}\n")
