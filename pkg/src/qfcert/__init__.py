"""qfcert: exact quasi-Frobenius checks with machine-verifiable certificates.

Everything works over a prime field F_p (p an odd prime), with algebras,
modules and bimodules given by explicit structure-constant / action-matrix
data.  Decision procedures emit certificates (split witnesses, similarity
data, isomorphisms) that the independent `qfcert.verify` module re-checks
using nothing but the linear-algebra kernel.
"""

__version__ = "0.1.0"
