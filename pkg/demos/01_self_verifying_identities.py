#!/usr/bin/env python3
"""Self-verifying identities: no registry, no resolver, just math.

An identity URN carries a digest of its own public key, so anyone holding
the URN and a key can check the binding locally.
"""

from vouchsafe import derive_identity, generate_keypair, parse_identity, validate_binding

# Make a keypair.  Pass a fixed 32-byte seed to get a reproducible key.
kp = generate_keypair()
print("raw public key: ", kp.public.raw.hex())
print("as DER (b64):   ", kp.public.b64)

# The identity is a URN: a human label plus a base32 SHA-256 digest of the
# raw key.  The label is metadata only; it never enters the digest.
alice = derive_identity(kp.public, "alice")
print("\nidentity URN:   ", alice.urn)
print("label:          ", alice.label)
print("digest (52 ch): ", alice.digest)

# Parsing recovers exactly what derive produced.
parsed = parse_identity(alice.urn)
assert (parsed.label, parsed.digest) == (alice.label, alice.digest)

# Binding validation is pure recomputation: hash the key, compare.
print("\nbinding holds:  ", validate_binding(alice, kp.public))

# A different key fails, obviously.
other = generate_keypair()
print("wrong key:      ", validate_binding(alice, other.public))

# Same key, different label: the digest is identical, but the URN differs,
# and the URN string is the principal.  alice and alice-backup are two
# different principals even though one key controls both.
backup = derive_identity(kp.public, "alice-backup")
print("\nsame digest:    ", backup.digest == alice.digest)
print("same principal: ", backup.urn == alice.urn)
