"""
Scoring a page by its archive history
=====================================

The archive feature summarizes a page's capture timeline in one number.
Older pages score higher, recently updated pages score higher, and a
timeline borrowed from the domain instead of the exact URL is penalized.
"""

from datetime import datetime, timedelta, timezone

import numpy as np

from webcred.archive import DOMAIN_FALLBACK, EXACT_URL, ArchiveTimeline, score_archive

today = datetime(2020, 1, 1, tzinfo=timezone.utc)

# a page first captured 1000 days ago, last captured 10 days ago
first = today - timedelta(days=1000)
last = today - timedelta(days=10)
snaps = (first, first + timedelta(days=2), last - timedelta(days=5), last)

print("exact URL      ", score_archive(ArchiveTimeline(snaps, EXACT_URL, today)))
print("domain fallback", score_archive(ArchiveTimeline(snaps, DOMAIN_FALLBACK, today)))
print("no captures    ", score_archive(ArchiveTimeline((), EXACT_URL, today)))

###############################################################################
# Age dominates through the log term. Sweep the first-capture date and
# watch the score climb slowly.

for age in np.geomspace(30, 10000, 6):
    start = today - timedelta(days=float(age))
    t = ArchiveTimeline((start, last), EXACT_URL, today)
    print(f"age {age:8.0f} days  score {score_archive(t):.4f}")
