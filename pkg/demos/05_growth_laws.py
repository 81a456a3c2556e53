"""
How fast can the path set grow?
===============================

A chain of E distinct hops is the worst case: it stores E(E+1)/2 paths,
and the hop i hops from the start appears in i*(E-i+1) of them.  These
closed forms double as a cheap self-check for the engine.
"""

from __future__ import annotations

import time

from alertpaths import AlertStore, insert_alert
from alertpaths.bench import (
    generate_chain,
    generate_fanout_stream,
    verify_complexity_tables,
)

print("chain length -> stored paths")
store = AlertStore()
for e, alert in enumerate(generate_chain(12), start=1):
    insert_alert(store, alert)
    expected = e * (e + 1) // 2
    got = store.stats().path_count
    marker = "ok" if got == expected else "MISMATCH"
    print(f"  E={e:2d}  paths={got:3d}  E(E+1)/2={expected:3d}  {marker}")
    assert got == expected

report = verify_complexity_tables(10)
print(f"\nchain of 10: {report.paths} paths "
      f"({report.total_occurrences} pair occurrences) -- "
      f"{'ok' if report.ok else report.failures}")
assert report.ok

# Realistic traffic fans out far less than a pure chain; a bounded
# fan-out stream stays comfortably fast at volume.
alerts = generate_fanout_stream(nodes=1500, alerts=10_000, max_fanout=3, seed=8)
big = AlertStore()
started = time.monotonic()
for alert in alerts:
    insert_alert(big, alert)
elapsed = time.monotonic() - started
stats = big.stats()
print(f"\n10,000 bounded-fanout alerts -> {stats.path_count} paths "
      f"in {elapsed:.2f}s")

print("\nok")
