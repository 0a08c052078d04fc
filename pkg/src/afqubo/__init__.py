"""Abstract-argumentation decision tasks solved as annealed QUBO problems.

The pipeline: parse a framework, build a quadratic penalty whose zero set
mirrors the wanted extensions, anneal it, and certify YES answers against
the exact polynomial checks.  An exhaustive oracle provides desk-scale
ground truth, a strict-enforcement encoding covers attack-relation edits,
and seeded generators reproduce the benchmark families.
"""

from .framework import (ArgumentSet, ArgumentationFramework, ParseError, Semantics,
                        attack_range, detect_format, format_apx, format_iccma,
                        parse, parse_apx, parse_iccma)
from .oracle import (DEFAULT_ORACLE_LIMIT, OracleLimitError, decide_oracle,
                     enumerate_extensions, grounded_mask, verify)
from .qubo import (QuboProblem, VariableRegistry, and_chain, and_gadget,
                   eliminate_dangling_aux, equality_gadget, fix_variable,
                   or_chain, or_gadget, or_true_chain)
from .encodings import (EncodedTask, add_nonempty, build_adm, build_cf, build_co,
                        build_pr, build_sst, build_st, fix_credulous,
                        fix_skeptical_negative, variable_count)
from .anneal import (AnnealParams, DecisionReport, EncodingConsistencyError,
                     Sample, SampleSet, beta_range, decide, sample)
from .enforcement import (EnforcementResult, EnforcementTask, build_strict_complete,
                          decode_attacks, default_lambda, enforce, hamming)
from .benchgen import GenSpec, gen_er, generate, transform_b3, transform_b4

__version__ = "0.1.0"
