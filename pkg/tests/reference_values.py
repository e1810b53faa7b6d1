"""Reference values for the coefficient triangle and the Poisson correlation grid."""

from fractions import Fraction as F

# a_r(n) for n = 2..10; zero entries are listed explicitly
COEFFICIENTS = {
    2: {1: F(-1, 2), 2: F(1, 2)},
    3: {1: F(1, 6), 2: F(-1, 2), 3: F(1, 3)},
    4: {1: F(0), 2: F(1, 4), 3: F(-1, 2), 4: F(1, 4)},
    5: {1: F(-1, 30), 2: F(0), 3: F(1, 3), 4: F(-1, 2), 5: F(1, 5)},
    6: {1: F(0), 2: F(-1, 12), 3: F(0), 4: F(5, 12), 5: F(-1, 2), 6: F(1, 6)},
    7: {1: F(1, 42), 2: F(0), 3: F(-1, 6), 4: F(0), 5: F(1, 2), 6: F(-1, 2), 7: F(1, 7)},
    8: {
        1: F(0), 2: F(1, 12), 3: F(0), 4: F(-7, 24),
        5: F(0), 6: F(7, 12), 7: F(-1, 2), 8: F(1, 8),
    },
    9: {
        1: F(-1, 30), 2: F(0), 3: F(2, 9), 4: F(0), 5: F(-7, 15),
        6: F(0), 7: F(2, 3), 8: F(-1, 2), 9: F(1, 9),
    },
    10: {
        1: F(0), 2: F(-3, 20), 3: F(0), 4: F(1, 2), 5: F(0),
        6: F(-7, 10), 7: F(0), 8: F(3, 4), 9: F(-1, 2), 10: F(1, 10),
    },
}

RHO_LAMBDAS = (0.01, 0.5, 1, 5, 10, 100)
RHO_DIMENSIONS = (2, 3, 4, 5)

# correlation of the Poisson-generated model, to 5 decimals
RHO_TABLE = {
    2: ("-0.00166", "-0.07692", "-0.14286", "-0.45455", "-0.62500", "-0.94340"),
    3: ("-0.00083", "-0.03846", "-0.07143", "-0.22727", "-0.31250", "-0.47170"),
    4: ("-0.00050", "-0.02326", "-0.04348", "-0.14286", "-0.20000", "-0.31250"),
    5: ("-0.00033", "-0.01563", "-0.02941", "-0.10000", "-0.14286", "-0.23256"),
}

RHO_DENOMINATORS = {2: (6, 1), 3: (12, 2), 4: (20, 3), 5: (30, 4)}


def rho_formula(lam, n):
    a, b = RHO_DENOMINATORS[n]
    return -lam / (a + b * lam)
