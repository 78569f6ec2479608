"""Interactive proving: enumerate options, apply, undo, re-check.

The session keeps every prior state, so undo is exact restoration, and
check_proof re-validates the finished tree node by node.
"""

from sequitur import (
    all_applications,
    apply_to_goal,
    check_proof,
    enumerate_applications,
    load_builtin,
    new_session,
    parse_goal,
    render_proof,
    undo,
)

lk = load_builtin("lk")

session = new_session(lk, parse_goal("p |- p and p", lk))
print("goal:", session.open_goals)

# andR applies in exactly one way here
gid, goal = session.open_goals[0]
apps = enumerate_applications(lk, "andR", goal)
print(f"\nandR offers {len(apps)} option(s)")
session = apply_to_goal(session, gid, apps[0])
print("open goals now:", [g for g, _ in session.open_goals])

# close both premises with init
for gid, goal in list(session.open_goals):
    session = apply_to_goal(session, gid,
                            enumerate_applications(lk, "init", goal)[0])
print("complete:", session.complete)
print("check_proof:", check_proof(lk, session.root))
print("\n" + render_proof(session.root, lk))

# backtrack all the way: three undos restore the initial goal
for _ in range(3):
    session = undo(session)
print("\nafter undo x3:", session.open_goals)
print("undo at the initial state is a no-op:",
      undo(session).state == session.state)

# the chooser situation: a goal where one rule applies four ways
ll = load_builtin("ll")
s2 = new_session(ll, parse_goal("|- ; p, q, p tensor q", ll))
options = all_applications(ll, s2.open_goals[0][1])
print(f"\ntensor goal offers {len(options)} applications in total:")
for i, app in enumerate(options):
    print(f"  [{i}] {app.rule}: premises {[str(p) for p in app.premises]}")
