"""Exception hierarchy shared by every stage of the toolkit."""


class MKAError(Exception):
    """Base class for all toolkit errors."""


class TypeViolation(MKAError):
    """A fact breaks the endpoint rule of its relation."""


class EmptyName(MKAError):
    pass


class SelfLoop(MKAError):
    pass


class UnknownEntity(MKAError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class EmptyCandidateSet(MKAError):
    pass


class BothEmpty(MKAError):
    pass


class NoMatchableEntity(MKAError):
    pass


class SeparatorCollision(MKAError):
    pass


class EmptyTarget(MKAError):
    pass


class EmptyCorpus(MKAError):
    pass


class EmptyCandidate(MKAError):
    pass


class NoNgrams(MKAError):
    pass


class TooFewConversations(MKAError):
    pass


class ParseError(MKAError):
    """Malformed input file; the message names the file and line."""
