class VeechError(Exception):
    '''Base class of every error raised by veechenum.

    Keyword arguments passed to the constructor are kept as the structured
    ``context`` of the error and echoed by :meth:`to_dict`.
    '''
    exit_code = 2

    def __init__(self, message: str = '', **context):
        super().__init__(message or self.__class__.__doc__)
        self.message = message or (self.__class__.__doc__ or '').strip()
        self.context = context

    def to_dict(self) -> dict:
        '''
        Returns a ``dict`` describing the error, used for structured error JSON.

        Return Type
        -----------
        :class:`dict`
        '''
        return {
            'error': self.__class__.__name__,
            'message': self.message,
            'context': {key: str(value) for key, value in self.context.items()},
        }


class InputError(VeechError):
    '''Raised when user supplied data is rejected.'''
    exit_code = 1


# exact arithmetic

class DivisionByZero(VeechError):
    '''Raised when dividing a number field element by zero.'''
    pass


class FieldMismatch(VeechError):
    '''Raised when two number field elements live in different fields.'''
    pass


# Perron-Frobenius

class NotIrreducible(VeechError):
    '''Raised when a matrix is required to be irreducible but is not.'''
    pass


class NonPositiveVector(VeechError):
    '''Raised when a test vector has a non-positive coordinate.'''
    pass


class NotSymmetric(VeechError):
    '''Raised when a matrix is required to be symmetric but is not.'''
    pass


# surfaces

class WidthMismatch(InputError):
    '''Raised when widths differ along a vertical gluing cycle.'''
    pass


class HeightMismatch(InputError):
    '''Raised when heights differ along a horizontal gluing cycle.'''
    pass


class NotConnected(InputError):
    '''Raised when the gluing permutations do not act transitively.'''
    pass


class NonPositiveSide(InputError):
    '''Raised when a rectangle has a side of non-positive length.'''
    pass


class AreaNotNormalized(InputError):
    '''Raised when the total area of a surface is not one.'''
    pass


class NotCommensurable(VeechError):
    '''Raised when two inverse moduli have an irrational ratio.'''
    pass


class UnsupportedMatrix(VeechError):
    '''Raised when a matrix cannot act on a rectangle presentation.'''
    pass


# origamis and Markov partitions

class NotInVeechGroup(VeechError):
    '''Raised when a matrix does not stabilize the origami.'''
    pass


class NotHyperbolic(VeechError):
    '''Raised when an affine automorphism is required to be hyperbolic.'''
    pass


class HitSingularity(VeechError):
    '''Raised when a traced leaf runs into a singularity.'''
    pass


class SaddleConnectionFound(VeechError):
    '''Raised when a separatrix of an eigendirection ends in a singularity.'''
    pass


class MarkovPropertyViolated(VeechError):
    '''Raised when a rectangle decomposition does not have the Markov property.'''
    pass


class IncompatibleGraph(VeechError):
    '''Raised when segment lengths cannot satisfy the rectangle side sums.'''
    pass


class NotEdgeToEdge(VeechError):
    '''Raised when a rectangle gluing is not along whole sides.'''
    pass


# hyperbolic geometry

class EmptyList(VeechError):
    '''Raised when an operation needs at least one element.'''
    pass


# command line

class InvalidJobSpec(InputError):
    '''Raised when the command line parameters are not valid.'''
    pass


class MalformedInput(InputError):
    '''Raised when an input file cannot be parsed.'''
    pass


class InternalAssertion(VeechError):
    '''Raised when a postcondition check fails.'''
    pass
