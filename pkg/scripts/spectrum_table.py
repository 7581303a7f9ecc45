"""Print spectra, alpha sums and the optimal alpha for the model tensors."""

import argparse

from cosk.model_spaces import flat, fubini_study, product_surfaces, space_form
from cosk.operators import alpha_sum, cosk_spectrum


def models():
    yield "S4 (kappa = 1)", space_form(4, 1.0)
    yield "S2 x S2", product_surfaces(1.0, 1.0)
    yield "S2 x H2", product_surfaces(1.0, -1.0)
    yield "CP2 (c = 4)", fubini_study(2, 4.0)[0]
    yield "CH2 (c = -4)", fubini_study(2, -4.0)[0]
    yield "CP3 (c = 4)", fubini_study(3, 4.0)[0]
    yield "flat R4", flat(4)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", type=float, nargs="+", default=[2.0, 4.5, 6.0])
    args = ap.parse_args()
    head = f"{'model':<14} {'S':>7} {'max alpha':>10} " + " ".join(f"{'a=' + format(a, 'g'):>8}" for a in args.alphas)
    print(head)
    print("-" * len(head))
    for name, R in models():
        rep = cosk_spectrum(R)
        amax = "none" if rep.alpha_max is None else f"{rep.alpha_max:.4g}"
        sums = " ".join(f"{alpha_sum(rep.eigs, a):8.3f}" if a <= rep.N else f"{'-':>8}" for a in args.alphas)
        print(f"{name:<14} {rep.scalar:7.2f} {amax:>10} {sums}")
        print(f"{'':<14} eigenvalues: {' '.join(f'{x:.3g}' for x in rep.eigs)}")


if __name__ == "__main__":
    main()
