"""
Delay sweeps as data
====================

A sweep tries every burst start and length and records, per lost
sub-symbol, when the staged decoder and the oracle recovered it. The CSV
is the same as the one written by `desco sweep`.
"""
import csv
import io
from collections import Counter

from desco import desco_construct, sweep

code = desco_construct(2, 3, 2)
report = sweep(code, 2)
rows = list(csv.DictReader(io.StringIO(report.to_csv())))
print(len(rows), "rows; columns:", list(rows[0]))

for decoder in ("structural", "oracle"):
    hist = Counter(int(r["delay"]) for r in rows if r["decoder"] == decoder)
    print(decoder, "delay histogram:", dict(sorted(hist.items())))
print("certified:", report.certified, "tight:", report.tight)
