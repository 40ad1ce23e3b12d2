#
# Runtime settings shared by the library and the command line
#

import logging
import os
from dataclasses import dataclass
from pathlib import Path


class GoodColimError(Exception):
    """
    Root of all exceptions raised by the library.  The command line catches
    this class (and its subclasses) to decide on an exit code.
    """


@dataclass(frozen=True)
class Limits:
    """
    Bounds that keep every exhaustive search at desk scale.

    Attributes:
      max_vertices: largest domain (number of vertices) a hom-set enumeration will accept
      max_homs: largest number of morphisms a single enumeration may produce
      max_probes: number of test cocones attached to a pushout certificate
    """
    max_vertices: int = 8
    max_homs: int = 20000
    max_probes: int = 16

    def enlarged(self, n: int) -> 'Limits':
        '''
        Return a copy with the vertex bound raised by n (used when a
        certificate is re-checked against a bigger probe bound).
        '''
        return Limits(self.max_vertices + n, self.max_homs, self.max_probes)


class MetaGC(type):
    """
    This metaclass creates the API for the GC class.  It defines read-only
    attributes that can be accessed but not written from outside the module.
    The values can only be set when the setup method is called.
    """

    @property
    def limits(cls):
        return cls._limits

    @property
    def budget(cls):
        return cls._budget

    @property
    def corpus_dir(cls):
        return cls._corpus_dir

    @property
    def seed(cls):
        return cls._seed

    def setup(
        cls,
        max_vertices: int | None = None,
        max_homs: int | None = None,
        budget: int | None = None,
        corpus: str | None = None,
        seed: int | None = None,
    ):
        '''
        Initialize the settings.  Values not passed here come from the
        environment (see DevGC) or from the built-in defaults.

        Arguments:
          max_vertices: bound on the domain of a hom-set enumeration
          max_homs: bound on the size of a hom-set
          budget: default number of iterations for the factorization engines
          corpus: path to the directory with the bundled instances
          seed: seed for the random instance generators
        '''
        default = Limits()
        mv = max_vertices if max_vertices is not None else DevGC.default_int('GOODCOLIM_MAX_VERTICES', default.max_vertices)
        mh = max_homs if max_homs is not None else DevGC.default_int('GOODCOLIM_MAX_HOMS', default.max_homs)
        if mv <= 0 or mh <= 0:
            raise ValueError('limits must be positive')
        cls._limits = Limits(mv, mh, default.max_probes)
        cls._budget = budget if budget is not None else DevGC.default_int('GOODCOLIM_BUDGET', 8)
        cls._corpus_dir = Path(corpus) if corpus else DevGC.corpus_dir()
        cls._seed = seed if seed is not None else DevGC.default_int('GOODCOLIM_SEED', 0)
        logging.debug(f'settings: {cls._limits}, budget {cls._budget}, corpus {cls._corpus_dir}')


class GC(metaclass=MetaGC):
    """
    Settings for the current process.  The command line calls `GC.setup`
    once; library functions read `GC.limits` when a caller does not pass
    explicit limits.
    """
    _limits = Limits()
    _budget = 8
    _corpus_dir = None
    _seed = 0

    @staticmethod
    def resolve(limits: Limits | None) -> Limits:
        '''
        Return the limits to use for an operation: the ones passed by
        the caller, or the process-wide settings.
        '''
        return limits or GC.limits


class DevGC:
    '''
    Defaults taken from environment variables.  GOODCOLIM_CORPUS overrides the
    location of the bundled corpus; the other variables set the defaults for
    the corresponding command line options.
    '''

    @staticmethod
    def default_int(varname, default):
        '''
        Return the integer value of an environment variable, or the default
        '''
        if s := os.getenv(varname):
            return int(s)
        return default

    @staticmethod
    def corpus_dir():
        '''
        Return the value of GOODCOLIM_CORPUS, or the corpus folder at the top
        of the repository
        '''
        if s := os.getenv('GOODCOLIM_CORPUS'):
            return Path(s)
        return Path(__file__).resolve().parents[2] / 'corpus'
