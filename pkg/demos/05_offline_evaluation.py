#!/usr/bin/env python3
"""Deciding a request: one admissible path or nothing.

The verifier configures trusted principals with bounded scopes.  A subject is
accepted for a requirement exactly when a single delegation path from a
trusted principal reaches it with every required label intact.  Scopes only
shrink along a path, and scopes of different paths never combine.
"""

from vouchsafe import (
    Request,
    Scope,
    TokenSet,
    TrustedPrincipal,
    UNCONSTRAINED,
    derive_identity,
    enumerate_paths,
    evaluate,
    generate_keypair,
    issue_attest,
    issue_revoke,
    issue_vouch,
    path_scope,
    resolve,
)

kp_a, kp_r, kp_m = generate_keypair(), generate_keypair(), generate_keypair()
alice = derive_identity(kp_a.public, "alice")
rex = derive_identity(kp_r.public, "rex")
mara = derive_identity(kp_m.public, "mara")

badge = issue_attest(kp_a, alice)                       # unconstrained subject
by_rex = issue_vouch(kp_r, rex, badge, purpose="read write")
clean = resolve(TokenSet([badge, by_rex]))

# Trust rex, capped at {read, write}.  Nothing is trusted implicitly.
roots = (TrustedPrincipal(rex.urn, Scope.of("read", "write")),)

decision = evaluate(clean, Request(badge.tid, frozenset({"read"}), roots))
print("verdict:        ", decision.verdict.value)
print("witness path:   ", " -> ".join(t.tid_hex[:12] for t in decision.witness.path))
print("effective scope:", decision.witness.effective_scope)

# The witness is independently checkable: recompute the path scope.
print("recomputed:     ", path_scope(decision.witness.root, decision.witness.path))

# Ask for more than the path carries and the same bundle rejects.
print("\nrequire admin ->", evaluate(clean, Request(badge.tid, frozenset({"admin"}), roots)).reason.value)

# No amplification: one path granting read, another granting write, does NOT
# add up to read+write.
v_read = issue_vouch(kp_r, rex, badge, purpose="read")
v_write = issue_vouch(kp_m, mara, badge, purpose="write")
both_roots = (
    TrustedPrincipal(rex.urn, UNCONSTRAINED),
    TrustedPrincipal(mara.urn, UNCONSTRAINED),
)
split = resolve(TokenSet([badge, v_read, v_write]))
d = evaluate(split, Request(badge.tid, frozenset({"read", "write"}), both_roots))
print("split paths for {read write} ->", d.verdict.value, d.reason.value)

# Revocation flows straight through to the decision.
retract = issue_revoke(kp_r, rex, by_rex)
after = resolve(TokenSet([badge, by_rex, retract]))
print("\nafter revocation ->", evaluate(after, Request(badge.tid, frozenset({"read"}), roots)).reason.value)

# Audit view: every rooted path with its remaining scope, bounded and ordered.
report = enumerate_paths(split, Request(badge.tid, frozenset(), both_roots))
print("\naudit paths:")
for entry in report.entries:
    hops = " -> ".join(t.tid_hex[:12] for t in entry.path)
    print(f"  [{entry.root.identity.split('.')[0]}] {hops}  scope={entry.effective_scope}")
