"""Shared test utilities (not a test module)."""


def welfare_foc_root(welfare, hi: float = 1.0, step: float = 1e-6) -> float:
    """Independent welfare maximizer: bisect the finite-difference derivative.

    Deliberately avoids the package's solver so the comparison between
    best-response roots and welfare optima has two separate code paths.
    """
    def deriv(c):
        lo_c = max(c - step, 0.0)
        return (welfare(c + step) - welfare(lo_c)) / (c + step - lo_c)

    lo = 2 * step
    if deriv(lo) <= 0:
        return 0.0
    while deriv(hi) > 0:
        hi *= 2
        assert hi < 1e6, "welfare derivative never turns negative"
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if deriv(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
