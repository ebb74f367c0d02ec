from fractions import Fraction
from typing import Optional

from ..exactnum import to_fraction
from .errors import InvalidJobSpec

FORMATS = ('jsonl', 'csv', 'svg')


class JobSpec:
    r"""
    Represents one command line job, a read-only view over the parsed arguments.

    Raises
    -------
    InvalidJobSpec
        A parameter is out of range or the threshold is not a rational literal.
    """
    def __init__(self, args: dict):
        self._args = dict(args)
        self._threshold = None
        if self._args.get('T') is not None:
            try:
                self._threshold = to_fraction(str(self._args['T']))
            except (TypeError, ValueError, ZeroDivisionError):
                raise InvalidJobSpec('threshold %r is not a rational literal' % (self._args['T'],), T=self._args['T'])
            if self._threshold <= 0:
                raise InvalidJobSpec('threshold must be positive, got %s' % self._threshold, T=str(self._threshold))
        for name in ('m', 'p'):
            value = self._args.get(name)
            if value is not None and value < 1:
                raise InvalidJobSpec('-%s must be at least 1, got %d' % (name, value), **{name: value})
        if self.workers < 1:
            raise InvalidJobSpec('--workers must be at least 1, got %d' % self.workers, workers=self.workers)
        if self.fmt not in FORMATS:
            raise InvalidJobSpec('unknown format %r' % self.fmt, format=self.fmt)

    def __repr__(self) -> str:
        return f'<veechenum.JobSpec subcommand={self.subcommand} threshold={self._threshold}>'

    @property
    def subcommand(self) -> str:
        '''
        :class:`str`: Returns the subcommand to run.
        '''
        return self._args.get('command')

    @property
    def threshold(self) -> Optional[Fraction]:
        '''
        :class:`~fractions.Fraction`: Returns the eigenvalue threshold ``T`` as an exact rational.
        '''
        return self._threshold

    @property
    def dimension(self) -> Optional[int]:
        '''
        :class:`int`: Returns the matrix size, ``-m`` or ``-p``.
        '''
        m = self._args.get('m')
        return m if m is not None else self._args.get('p')

    @property
    def fmt(self) -> str:
        '''
        :class:`str`: Returns the output format.
        '''
        return self._args.get('format') or 'jsonl'

    @property
    def out(self) -> Optional[str]:
        '''
        :class:`str`: Returns the output path, ``None`` for standard output.
        '''
        return self._args.get('out')

    @property
    def workers(self) -> int:
        '''
        :class:`int`: Returns the size of the worker pool.
        '''
        workers = self._args.get('workers')
        return 1 if workers is None else workers

    @property
    def positive(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if only entrywise positive matrices are wanted.
        '''
        return bool(self._args.get('positive'))

    @property
    def oracle(self) -> bool:
        '''
        :class:`bool`: Returns ``True`` if results are to be checked against the brute force oracles.
        '''
        return bool(self._args.get('oracle'))

    def get(self, name: str, default=None):
        '''Returns any other parsed argument.'''
        value = self._args.get(name)
        return default if value is None else value

    def to_dict(self) -> dict:
        '''
        :class:`dict`: Returns the job as a `dict` type.
        '''
        return {
            'subcommand': self.subcommand,
            'threshold': None if self._threshold is None else str(self._threshold),
            'dimension': self.dimension,
            'format': self.fmt,
            'workers': self.workers,
            'positive': self.positive,
            'oracle': self.oracle,
        }
