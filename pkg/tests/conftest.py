import cmath
import math

import numpy as np
import pytest


def dft_oracle(n):
    """DFT matrix from the entry formula, built with cmath in pure Python."""
    return np.array([[cmath.exp(2j * math.pi * j * l / n) / math.sqrt(n) for l in range(n)]
                     for j in range(n)])


def hadamard_oracle(n):
    """Sylvester Hadamard matrix by repeated Kronecker products, unit-normalized."""
    h = np.array([[1.0]])
    while h.shape[0] < n:
        h = np.kron(np.array([[1.0, 1.0], [1.0, -1.0]]), h)
    return h / math.sqrt(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
