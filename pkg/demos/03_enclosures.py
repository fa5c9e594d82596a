"""Taylor forms of increasing order trade evaluations for tightness."""

from boxroots import BoxCtx, ExtensionOrder, IBox, parse_system
from boxroots.enclosure import EvalCounters

# x^2 - 2*x evaluated naively suffers from dependency: the two
# occurrences of x vary independently.  Centered forms do not.
sys_ = parse_system("vars x\np: x^2 - 2*x")
cs = sys_.compile(53)

# Exact range over [1-h, 1+h] is [-1, -1+h^2].
for h in (0.5, 0.1, 0.01):
    X = IBox.from_bounds([(1 - h, 1 + h)], 53)
    ctx = BoxCtx(cs, X)
    print("box [1-%g, 1+%g], exact range width %g" % (h, h, h * h))
    for order in (ExtensionOrder.ORDER0, ExtensionOrder.ORDER1,
                  ExtensionOrder.ORDER2):
        iv = ctx.extension(order)[0]
        print("  order %d: width %.3e  %s" % (order.value, iv.width(),
                                              iv.decimal_bounds()))

# The natural form's width shrinks like h, the centered forms like
# h^2, with the Hessian form half as wide as the mean-value form.
# That is why the solver prefers high order near a root and low order
# for coarse exclusion far away, where any of them answers.

print("\nEvaluation price of one application:")
for order, label in ((ExtensionOrder.ORDER0, "order 0"),
                     (ExtensionOrder.ORDER1, "order 1"),
                     (ExtensionOrder.ORDER2, "order 2")):
    counters = EvalCounters()
    ctx = BoxCtx(cs, IBox.from_bounds([(0.5, 1.5)], 53), counters=counters)
    ctx.extension(order)
    print("  %s: f=%d  jacobian=%d  hessian=%d"
          % (label, counters.evals_f, counters.evals_j, counters.evals_h))

# BoxCtx caches per-box: asking again, or asking for the Krawczyk test
# on the same box, reuses the Hessians already paid for.  (The box here
# avoids the stationary point so the Krawczyk test actually runs.)
counters = EvalCounters()
ctx = BoxCtx(cs, IBox.from_bounds([(1.2, 1.8)], 53), counters=counters)
ctx.extension(ExtensionOrder.ORDER2)
h_first = counters.evals_h
from boxroots import KrawczykVariant
ctx.krawczyk(KrawczykVariant.K_ORDER2)
print("\nhessian evals after order-2 extension: %d, after adding the "
      "order-2 Krawczyk test: %d (shared: %d)"
      % (h_first, counters.evals_h, counters.shared_h))
