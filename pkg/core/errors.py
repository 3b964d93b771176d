"""
Error hierarchy
Every failure the library reports carries a short machine-readable code
"""

from typing import Optional


class RegrepError(Exception):
    """Base class for all regrep errors"""

    code = "RegrepError"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_dict(self):
        return {'code': self.code, 'message': self.message, 'details': self.details}


# --- group_core ---

class NonSquarefree(RegrepError):
    code = "NonSquarefree"


class NotCoprime(RegrepError):
    code = "NotCoprime"


class BadAction(RegrepError):
    code = "BadAction"


class TooLarge(RegrepError):
    code = "TooLarge"


class NotNormal(RegrepError):
    code = "NotNormal"


# --- perm_engine ---

class DegreeMismatch(RegrepError):
    code = "DegreeMismatch"


class NotSubgroup(RegrepError):
    code = "NotSubgroup"


class IndexTooLarge(RegrepError):
    code = "IndexTooLarge"


# --- group_aut / cayley ---

class IdentityInS(RegrepError):
    code = "IdentityInS"


class HypothesisFailed(RegrepError):
    code = "HypothesisFailed"


class WrongShape(RegrepError):
    code = "WrongShape"


class NoCaseMatched(RegrepError):
    code = "NoCaseMatched"


class NotInverseClosed(RegrepError):
    code = "NotInverseClosed"


# --- wreath ---

class BadChain(RegrepError):
    code = "BadChain"


class NotInK(RegrepError):
    code = "NotInK"


class HypothesisViolated(RegrepError):
    code = "HypothesisViolated"


class NotAutSubgroup(RegrepError):
    code = "NotAutSubgroup"


class HypothesisNotMet(RegrepError):
    code = "HypothesisNotMet"


# --- witness / classify ---

class NoGRRExists(RegrepError):
    code = "NoGRRExists"


class BudgetExhausted(RegrepError):
    code = "BudgetExhausted"


class NotConfigured(RegrepError):
    code = "NotConfigured"


class NotPrime(RegrepError):
    code = "NotPrime"


# --- infrastructure ---

class ParseError(RegrepError):
    """Literal or CLI argument could not be parsed"""

    code = "ParseError"

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        super().__init__(message, text=text, position=position)
        self.text = text
        self.position = position

    def __str__(self):
        if self.position is None:
            return self.message
        return f"{self.message}\n  {self.text}\n  {' ' * self.position}^"


class CertificateError(RegrepError):
    """A produced or stored certificate failed re-verification (a bug, or a tampered file)"""

    code = "CertificateError"
