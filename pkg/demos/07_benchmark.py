"""Comparing the four enclosure/contractor strategies on random systems.

Strategy (1) uses order-2 enclosures with the order-2 Krawczyk test,
(2) keeps the order-2 enclosure but tests at order 1, (3) drops to
mean-value enclosures, (4) uses plain natural evaluation.  Higher
order costs more per box and visits fewer boxes.
"""

from boxroots import bench, format_table
from boxroots.bench import median_cells

# Small instances so the demo finishes in seconds; raise d (and the
# seed count) to reproduce the ordering at more dramatic scales.
rows = []
for m, d in ((2, 8), (2, 12)):
    rows += bench(m, d, strategies=(1, 2, 3, 4), seeds=(1, 2, 3))

print(format_table(rows))

med = median_cells(rows)
print("median boxes explored:")
for (m, d, sid), (n, t, _) in sorted(med.items()):
    print("  m=%d d=%-2d strategy (%d): n=%-5d t=%.3fs" % (m, d, sid, n, t))
