"""Exception and warning types raised by dmxy."""


class DmxyError(Exception):
    """Base class for all dmxy errors."""


class DegenerateSpectrum(DmxyError, ValueError):
    """The Hamiltonian sits at (or numerically too close to) its xi = eta point.

    The secular solution requires four distinct transition frequencies, so the
    closed-form dynamics is undefined there.
    """

    def __init__(self, xi, eta, tol):
        self.xi = xi
        self.eta = eta
        self.tol = tol
        super().__init__(
            f"degenerate spectrum: |xi - eta| = {abs(xi - eta):.3e} <= {tol:.3e} "
            f"(xi={xi!r}, eta={eta!r})"
        )


class ZeroFrequency(DmxyError, ValueError):
    """A bath rate was requested at exactly zero transition frequency."""


class NotAnXState(DmxyError, ValueError):
    """The density matrix has weight outside the diagonal / anti-diagonal."""


class NoUniqueSteadyState(DmxyError, ValueError):
    """One of the two relaxation channels has zero total rate."""


class StepSizeTooLarge(DmxyError, RuntimeError):
    """The integrator produced a state with a clearly negative eigenvalue."""


class ConfigError(DmxyError, ValueError):
    """Malformed scenario file or command-line values.

    ``line`` and ``field`` locate the problem when known.
    """

    def __init__(self, message, line=None, field=None):
        self.message = message
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class NearDegenerateWarning(UserWarning):
    """Spectrum gap is comparable to the dissipative rates.

    Results stay finite but the secular (Born-Markov) treatment is unreliable.
    """
