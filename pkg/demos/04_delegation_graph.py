#!/usr/bin/env python3
"""From surviving tokens to a scope-labeled delegation graph.

Nodes are the attest/vouch statements left after resolution; each vouch adds
one edge toward the exact token it endorsed, labeled with the vouch's scope.
References are content hashes, so edges cannot be rewired after the fact and
cycles cannot be built at all.
"""

from vouchsafe import (
    TokenSet,
    build_graph,
    decode,
    derive_identity,
    generate_keypair,
    issue_attest,
    issue_vouch,
    parse_scope,
    resolve,
)

# Scope values are just whitespace-separated label sets; absent means
# unconstrained, blank means empty (grants nothing).
print("parse_scope('read write') ->", parse_scope("read write"))
print("parse_scope(None)         ->", parse_scope(None))
print("parse_scope('')           ->", parse_scope(""))

kp_a, kp_r, kp_m = generate_keypair(), generate_keypair(), generate_keypair()
alice = derive_identity(kp_a.public, "alice")
rex = derive_identity(kp_r.public, "rex")
mara = derive_identity(kp_m.public, "mara")

badge = issue_attest(kp_a, alice, purpose="read write admin")
by_rex = issue_vouch(kp_r, rex, badge, purpose="read write")
by_mara = issue_vouch(kp_m, mara, by_rex, purpose="read")

graph = build_graph(resolve(TokenSet([badge, by_rex, by_mara])))
print("\ngraph dump (stable ordering, diff-friendly):")
print(graph.dump())

# A vouch whose subject is missing from the set stays as an isolated node:
# endorsing an absent statement delegates nothing.
dangling = issue_vouch(kp_m, mara, badge, purpose="read")
graph2 = build_graph(resolve(TokenSet([dangling, by_rex])))
print("isolated vouches:", len(graph2.nodes), "nodes,", len(graph2.edges), "edges")

# References commit to exact content.  Reissue the badge (same issuer, same
# kind of claim, new bytes) and the old endorsement refuses to attach to it:
# the content hash pins the original, so no edge comes into being.
badge_v2 = issue_attest(kp_a, alice, purpose="read write admin")
graph3 = build_graph(resolve(TokenSet([badge_v2, by_rex])))
print("endorsement attaches to the reissued badge:", len(graph3.edges) == 1)
