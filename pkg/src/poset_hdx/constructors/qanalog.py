"""q-analogs: q-integers and Gaussian binomial coefficients."""

import galois

from ..exceptions import BadArgumentsError


def check_prime_power(q: int) -> int:
    """Return ``q`` if it is a prime power, else raise BadArgumentsError."""
    if not isinstance(q, int) or isinstance(q, bool) or q < 2 or not galois.is_prime_power(q):
        raise BadArgumentsError(message=f"q must be a prime power, got {q!r}")
    return q


def q_integer(n: int, q: int) -> int:
    """[n]_q = 1 + q + ... + q^(n-1); [0]_q = 0."""
    if n < 0:
        raise BadArgumentsError(message=f"q-integer needs n >= 0, got {n}")
    return (q**n - 1) // (q - 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """
    Number of k-dimensional subspaces of F_q^n.

    Raises:
        BadArgumentsError: If k is outside 0..n or q is not a prime power.
    """
    check_prime_power(q)
    if not 0 <= k <= n:
        raise BadArgumentsError(message=f"Gaussian binomial needs 0 <= k <= n, got n={n}, k={k}")
    num = 1
    denom = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        denom *= q ** (i + 1) - 1
    return num // denom
