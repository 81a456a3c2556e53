"""
Scoring endpoints and paths by threat
=====================================

The score of a set of alerts is sqrt(distinct signatures x total volume):
diversity and volume both push it up.  Endpoint scores use one pair's
alerts; path scores pool the alerts of every pair on the path.
"""

from __future__ import annotations

from alertpaths import (
    Alert,
    AlertStore,
    insert_alert,
    normalize_color,
    recompute_threat_scores,
)

store = AlertStore()

# Noisy scanner on the first hop, one quiet-but-new signature on the second.
stream = [Alert("edge", "app", 1_000 + i, sid=2100498, seq=i) for i in range(8)]
stream += [
    Alert("edge", "app", 2_000, sid=2210037, seq=8),
    Alert("app", "db", 3_000, sid=2834778, seq=9),
]
for alert in stream:
    insert_alert(store, alert)

endpoints_updated, paths_updated = recompute_threat_scores(store)
print(f"rescored {endpoints_updated} endpoints and {paths_updated} paths")

top, stale = store.top_endpoints_by_ets(5)
assert not stale
print("\ntop endpoints")
for record in top:
    print(f"  {record.pair.source} -> {record.pair.destination}: "
          f"ets={record.ets:.2f} ({len(record.alerts)} alerts)")

top_paths, _ = store.top_paths_by_pts(5)
print("\ntop paths")
for path in top_paths:
    print(f"  {' -> '.join(path.vertices)}: pts={path.pts:.2f}")

# The two-hop path pools 3 signatures over 10 alerts: sqrt(30).
best = top_paths[0]
assert best.vertices == ("edge", "app", "db")
assert abs(best.pts - 30 ** 0.5) < 1e-9

# Scores map onto a red channel for display; the hottest edge saturates.
hottest = top[0].ets
for record in top:
    color = normalize_color(record.ets, hottest)
    print(f"  {record.pair.source} -> {record.pair.destination} "
          f"renders as #{color:06X}")

print("\nok")
