"""
Streaming alerts into a cumulative path store
=============================================

Feed alerts one at a time and watch the store grow every acyclic,
chronologically feasible path through them.
"""

from __future__ import annotations

from alertpaths import Alert, AlertStore, insert_alert


def show(store: AlertStore, note: str) -> None:
    stats = store.stats()
    print(f"\n{note}")
    print(f"  nodes={stats.node_count} endpoints={stats.endpoint_count} "
          f"alerts={stats.alert_count} paths={stats.path_count}")
    for path in sorted(store.paths(), key=lambda p: p.vertices):
        print("   ", " -> ".join(path.vertices))


store = AlertStore()

# A short lateral movement: workstation -> jump host -> file server.
show_after = [
    Alert("ws-7", "jump-1", 1_000_000, sid=2010935, seq=0),
    Alert("jump-1", "files-2", 2_000_000, sid=2013028, seq=1),
    Alert("files-2", "db-9", 3_000_000, sid=2024364, seq=2),
]
for alert in show_after:
    insert_alert(store, alert)
    show(store, f"after {alert.source} -> {alert.destination}")

# Every contiguous stretch of the chain is now a stored path.
assert store.stats().path_count == 6

# A repeat of a known hop only annotates the endpoint record; the path
# set is already complete for this pair.
insert_alert(store, Alert("jump-1", "files-2", 4_000_000, sid=2013028, seq=3))
show(store, "after a repeat alert on jump-1 -> files-2")
assert store.stats().path_count == 6

# An alert pointing back at the origin cannot extend any path that
# already contains it -- the store never records a cycle.
insert_alert(store, Alert("db-9", "ws-7", 5_000_000, sid=2010935, seq=4))
show(store, "after a back edge db-9 -> ws-7")
assert all(len(set(p.vertices)) == len(p.vertices) for p in store.paths())

print("\nok")
