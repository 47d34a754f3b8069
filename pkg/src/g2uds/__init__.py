"""Genus-2 isogeny undeniable signatures at desk scale.

Research code: nothing here is constant time or hardened.
"""

from .field import FieldParams, QuadField, make_params
from .uds import (Commitment, PrivateKey, PublicKey, PublicParams, Response, Signature, check,
                  con_commit, con_respond, con_verify, dis_commit, dis_respond, dis_verify,
                  hash_to_scalars, keygen, setup, sign)

P59 = dict(l_A=2, e_A=2, l_M=3, e_M=1, l_C=5, e_C=1, f=1, sign=-1)
P719 = dict(l_A=2, e_A=4, l_M=3, e_M=2, l_C=5, e_C=1, f=1, sign=-1)

__version__ = "0.1.0"

__all__ = [
    "FieldParams", "QuadField", "make_params", "PublicParams", "PrivateKey", "PublicKey",
    "Signature", "Commitment", "Response", "setup", "keygen", "sign", "check", "hash_to_scalars",
    "con_commit", "con_respond", "con_verify", "dis_commit", "dis_respond", "dis_verify",
    "P59", "P719",
]
