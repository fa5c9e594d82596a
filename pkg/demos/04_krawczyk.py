"""The Krawczyk test: certify a unique root or rule the box out."""

from boxroots import (
    Classification,
    IBox,
    KrawczykVariant,
    krawczyk,
    parse_system,
)

sys_ = parse_system("vars x\np: x^2 - 2")
cs = sys_.compile(53)

# Three boxes, three verdicts.
for lo, hi in ((1, 2), (3, 4), (1.9, 2.1)):
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, IBox.from_bounds([(lo, hi)], 53))
    img = out.image.ivs[0].decimal_bounds() if out.image is not None else None
    print("[%g, %g] -> %s  image=%s" % (lo, hi, out.classification.name, img))

# STRICTLY_INSIDE proves existence and uniqueness inside the box, and
# the image is itself a valid (smaller) enclosure, so iterating the
# operator refines the root quadratically.
X = IBox.from_bounds([(1, 2)], 53)
print("\ncontracting toward sqrt(2):")
for step in range(6):
    out = krawczyk(cs, KrawczykVariant.K_ORDER2, X)
    if out.classification is not Classification.STRICTLY_INSIDE:
        break
    X = out.image
    print("  step %d: width %.3e" % (step + 1, X.width()))

# A singular midpoint Jacobian makes the preconditioner unusable; the
# test reports failure rather than guessing, and the solver bisects.
out = krawczyk(cs, KrawczykVariant.K_ORDER2, IBox.from_bounds([(-1, 1)], 53))
print("\n[-1, 1] (stationary midpoint) ->", out.classification.name)

# The two variants differ in how they enclose the Jacobian over the
# box (natural evaluation vs midpoint value plus a Hessian term).  On
# borderline boxes they can disagree, in either direction; neither
# dominates box-for-box.  The benchmark demo shows where order 2 pays
# off: fewer boxes over a whole run.
cubic = parse_system("vars x\np: x^3 - 2*x - 5").compile(53)
X = IBox.from_bounds([(1.4, 2.8)], 53)
print()
for variant in (KrawczykVariant.K_ORDER1, KrawczykVariant.K_ORDER2):
    out = krawczyk(cubic, variant, X)
    print("%s on x^3-2x-5 over [1.4, 2.8]: %s"
          % (variant.name, out.classification.name))
