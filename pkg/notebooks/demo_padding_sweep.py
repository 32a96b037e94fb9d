"""
Where does the tag signal live?
===============================

Pages are encoded as the sequence of their HTML tags. A classifier over the
first ``pad`` tags is cross-validated for every window length in the grid.
Here the label is planted in the leading tags only, so long windows mostly
add noise.
"""

from webcred.evaluate import padding_sweep, sweep_table
from webcred.html2seq import PAD_GRID, tokenize_tags
from webcred.learn import LearnerSpec
from webcred.synthetic import planted_tag_corpus

pages = planted_tag_corpus(200, seed=0, signal_len=25)
streams = [tokenize_tags(p.html) for p in pages]
print("median tags per page:", sorted(len(s) for s in streams)[len(streams) // 2])

rows = padding_sweep(streams, [p.rating for p in pages], "two_class", LearnerSpec("nb"), grid=PAD_GRID)
print(sweep_table(rows))

###############################################################################
# A crude text plot of weighted F1 against the window length.

for r in rows:
    print(f"{r.pad:>6} {'#' * int(round(r.weighted_f1 * 40))}")
