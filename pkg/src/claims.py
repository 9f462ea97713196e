############################################################################
# Copyright (c) 2026 RepCheck authors
# # All Rights Reserved
# See file LICENSE for details.
############################################################################

import time
import logging

import numpy as np

from src.chartab import choose_prime, kappa_selfduality_check, match_product_rows
from src.common import DEFAULT_BOUNDS, ConfigError, compositions, list_to_str, str_to_list
from src.deligne import (
    FiltrationError,
    deligne_filtration,
    deligne_uniqueness_check,
    nilpotent_class_representatives,
    nilpotent_matrices,
    nu_image_check,
)
from src.ffalg import SUPPORTED_ORDERS, field_for_order
from src.geometry import (
    dual_key_lemma_check,
    key_lemma_check,
    key_lemma_fixture_check,
    theta_witness_by_reduction,
    enumerate_X,
    verify_geometric_statement,
)
from src.groups import GroupSpec, enumerate_group, exponent
from src.jacquet import (
    ParabolicSetting,
    equivalence_check,
    gelfand_pair_check,
    jacquet_multiplicities,
    levi_component_identity,
    mass_identity_check,
    verify_theorem_GL,
)
from src.symgrp import (
    MAX_DEGREE,
    adjoint_hecke_commute,
    classification_predicts_gelfand,
    iterated_lr_coefficient,
    strong_gelfand_check,
)
from src.table_storage import TableStorage, TransientStorage
from src.verification_report import Verdict, VerificationReport

logger = logging.getLogger('RepCheck')

COMMANDS = ('jacquet', 'thmgl', 'gelfand', 'geometry', 'keylemma', 'dualkey', 'deligne', 'nuimage',
            'symgroup', 'hecke', 'chartab')
# commands where --n is the matrix size rather than a block of a composition
SIZE_COMMANDS = ('geometry', 'deligne', 'nuimage', 'chartab')
DELIGNE_UNIQUENESS_LIMIT = 3


class RunConfig:
    def __init__(self, command, q=None, n=None, k=None, composition=None, prime=None, bounds=DEFAULT_BOUNDS,
                 cache_dir=None, use_cache=True, out=None, jobs=1, expect_fail=False):
        self.command = command
        self.q = q
        self.n = n
        self.k = k
        if isinstance(composition, str):
            composition = str_to_list(composition)
        self.composition = tuple(int(x) for x in composition) if composition else None
        self.prime = prime
        self.bounds = bounds
        self.cache_dir = cache_dir
        self.use_cache = use_cache
        self.out = out
        self.jobs = jobs
        self.expect_fail = expect_fail

    @classmethod
    def from_params(cls, command, params, **kwargs):
        return cls(command, params.get('q'), params.get('n'), params.get('k'), params.get('composition'),
                   params.get('prime'), **kwargs)

    def block_composition(self):
        """The composition given directly, or (n, k) from the block sizes."""
        if self.composition is not None:
            return self.composition
        if self.n is not None and self.k is not None:
            return self.n, self.k
        return None

    def params(self):
        result = {}
        for name in ('q', 'n', 'k', 'prime'):
            value = getattr(self, name)
            if value is not None:
                result[name] = value
        if self.composition is not None:
            result['composition'] = list(self.composition)
        return result

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError("Unknown command %s" % self.command)
        if any(b <= 0 for b in self.bounds):
            raise ConfigError("Bounds must be positive")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError("Number of jobs must be positive")
        for name in ('n', 'k'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError("--%s must be positive" % name)
        if self.composition is not None and (not self.composition or min(self.composition) < 1):
            raise ConfigError("Composition parts must be positive")
        if self.command not in ('symgroup', 'hecke'):
            if self.q is None:
                raise ConfigError("%s needs the field order --q" % self.command)
            if self.q not in SUPPORTED_ORDERS:
                raise ConfigError("Field order %d is not supported, use one of %s" %
                                  (self.q, list_to_str(SUPPORTED_ORDERS, ", ")))
        if self.command in SIZE_COMMANDS or self.command == 'thmgl':
            if self.n is None:
                raise ConfigError("%s needs --n" % self.command)
        elif self.command in ('keylemma', 'dualkey'):
            if self.k is None and self.composition is None:
                raise ConfigError("%s needs --k or --composition" % self.command)
            if self.k is not None and self.composition is not None and sum(self.composition) != self.k:
                raise ConfigError("Composition (%s) does not split k = %d" % (list_to_str(self.composition), self.k))
        elif self.block_composition() is None:
            raise ConfigError("%s needs --composition or both --n and --k" % self.command)
        if self.command == 'chartab' and self.composition is not None and sum(self.composition) != self.n:
            raise ConfigError("Composition (%s) does not split %d" % (list_to_str(self.composition), self.n))
        if self.command in ('symgroup', 'hecke') and sum(self.block_composition()) > MAX_DEGREE:
            raise ConfigError("Symmetric groups of degree at most %d are supported" % MAX_DEGREE)
        if self.composition is not None and self.n is not None and self.k is not None and \
                self.command not in SIZE_COMMANDS and sum(self.composition) != self.n + self.k:
            raise ConfigError("Composition (%s) does not split n + k = %d" %
                              (list_to_str(self.composition), self.n + self.k))
        return True

    def make_storage(self):
        if not self.use_cache:
            return TransientStorage()
        return TableStorage(self.cache_dir)


def _verdict(passed):
    return Verdict.passed if passed else Verdict.failed


# == GL_N(F_q) at a parabolic ==
def run_jacquet(config, storage):
    composition = config.block_composition()
    claim = "theorem-A" if len(composition) == 2 else "multiplicity-one"
    setting = ParabolicSetting(config.q, composition, config.prime, storage, config.bounds)
    report = jacquet_multiplicities(setting)
    mass = mass_identity_check(setting, report)
    equivalent = equivalence_check(setting, report)
    details = {'mass_identity': mass, 'formulas_agree': equivalent,
               'degrees_G': setting.table_G.degrees, 'degrees_M': setting.table_M.degrees}
    counterexample = None
    hit = report.first_entry_at_least(2)
    if hit is not None:
        i, j, multiplicity = hit
        counterexample = {'pi': i, 'rho': j, 'multiplicity': multiplicity, 'matrix': report.matrix}
    elif not (mass and equivalent):
        counterexample = {'matrix': report.matrix}
    passed = hit is None and mass and equivalent
    params = config.params()
    params['composition'] = list(composition)
    return VerificationReport(claim, params, _verdict(passed), setting.prime, report.max_multiplicity,
                              counterexample, details)


def run_thmgl(config, storage):
    passed, report = verify_theorem_GL(config.q, config.n, storage, config.prime, config.bounds)
    splitting = levi_component_identity(config.q, config.n, storage, config.bounds)
    identity_holds = report.checks['restriction_identity']
    details = {'restriction_identity': identity_holds, 'levi_splitting': splitting._asdict()}
    counterexample = None
    if not (passed and identity_holds and splitting.holds):
        hits = np.argwhere(report.matrix >= 2)
        counterexample = {'matrix': report.matrix, 'first': hits[0] if len(hits) else None}
    return VerificationReport("theorem-D", config.params(), _verdict(passed and identity_holds and splitting.holds),
                              report.params['prime'], report.max_multiplicity, counterexample, details)


def run_gelfand(config, storage):
    composition = config.block_composition()
    hecke = gelfand_pair_check(config.q, composition, config.bounds)
    counterexample = None if hecke.commutative else hecke.to_dict()
    params = config.params()
    params['composition'] = list(composition)
    return VerificationReport("gelfand-pair", params, _verdict(hecke.commutative), None, None, counterexample,
                              {'basis_size': hecke.basis_size})


# == orbit statements ==
def run_geometry(config, storage):
    report = verify_geometric_statement(config.q, config.n, config.bounds.size)
    details = {'counts': report.counts}
    counterexample = {'pairs': report.counterexamples} if not report.passed else None
    passed = report.passed
    if passed:
        # the Fitting-split witness must also exist for every pair
        reduced = 0
        for n in range(1, config.n):
            for pair in enumerate_X(config.q, n, config.n - n, config.bounds.size):
                certificate = theta_witness_by_reduction(pair)
                if not certificate.witnessed:
                    reduced += 1
                    if counterexample is None:
                        counterexample = {'pairs': [certificate.to_dict()], 'construction': 'reduction'}
        details['reduction_refuted'] = reduced
        passed = reduced == 0
    return VerificationReport("geometric-statement", config.params(), _verdict(passed), None, None,
                              counterexample, details)


def _orbit_counterexample(report):
    return {'element': report.element, 'transpose': report.transpose, 'orbit': report.orbit}


def _orbit_claim(claim, check, config):
    k = config.k if config.k is not None else sum(config.composition)
    shapes = [config.composition] if config.composition is not None else list(compositions(k))
    results = {}
    counterexample = None
    for composition in shapes:
        report = check(config.q, k, composition, config.bounds)
        results[list_to_str(composition)] = {'passed': report.passed, 'orbits': report.orbit_count}
        if not report.passed and counterexample is None:
            counterexample = _orbit_counterexample(report)
            counterexample['composition'] = list(composition)
    params = config.params()
    params['k'] = k
    return VerificationReport(claim, params, _verdict(counterexample is None), None, None, counterexample,
                              {'compositions': results})


def run_keylemma(config, storage):
    verification = _orbit_claim("key-lemma", key_lemma_check, config)
    if verification.counterexample is not None and config.q == 2 and \
            verification.counterexample['composition'] == [1, 1, 1]:
        verification.details['frozen_fixture_reverified'] = key_lemma_fixture_check(config.q, bounds=config.bounds)
    return verification


def run_dualkey(config, storage):
    return _orbit_claim("dual-key-lemma", dual_key_lemma_check, config)


# == nilpotent operators ==
def run_deligne(config, storage):
    field = field_for_order(config.q)
    checked = 0
    counterexample = None
    for A in nilpotent_matrices(config.q, config.n, config.bounds.size):
        try:
            deligne_filtration(field, A)
        except FiltrationError as err:
            logger.warning("Deligne filtration fails for %s: %s" % (A.tolist(), str(err)))
            if counterexample is None:
                counterexample = {'matrix': A.tolist(), 'reason': str(err)}
        checked += 1
    details = {'nilpotent_matrices': checked, 'filtrations_valid': counterexample is None}
    unique = True
    if config.q == 2 and config.n <= DELIGNE_UNIQUENESS_LIMIT:
        unique = deligne_uniqueness_check(config.n, config.q)
        details['unique'] = unique
    if not unique and counterexample is None:
        counterexample = {'dimension': config.n}
    return VerificationReport("deligne-filtration", config.params(), _verdict(counterexample is None), None, None,
                              counterexample, details)


def run_nuimage(config, storage):
    field = field_for_order(config.q)
    results = {}
    counterexample = None
    for partition, A in nilpotent_class_representatives(config.n):
        report = nu_image_check(field, A, config.bounds)
        results[list_to_str(partition)] = {'image': report.image_size, 'parabolic': report.parabolic_size}
        if not report.passed and counterexample is None:
            counterexample = {'jordan_type': list(partition), 'A': A,
                              'image_size': report.image_size, 'parabolic_size': report.parabolic_size}
    return VerificationReport("nu-image", config.params(), _verdict(counterexample is None), None, None,
                              counterexample, {'jordan_types': results})


# == symmetric groups ==
def run_symgroup(config, storage):
    composition = config.block_composition()
    report = strong_gelfand_check(composition)
    predicted = classification_predicts_gelfand(composition)
    details = {'predicted': predicted}
    counterexample = None
    if not report.passed:
        counterexample = {'partition': report.partition, 'targets': report.targets,
                          'multiplicity': report.max_multiplicity,
                          'lr_multiplicity': iterated_lr_coefficient(report.partition, report.targets)}
    params = config.params()
    params['composition'] = list(composition)
    return VerificationReport("strong-gelfand", params, _verdict(report.passed), None, report.max_multiplicity,
                              counterexample, details)


def run_hecke(config, storage):
    composition = config.block_composition()
    result = adjoint_hecke_commute(composition, config.bounds.basis)
    report = result.report
    details = {'basis_size': report.basis_size, 'predicted': classification_predicts_gelfand(composition)}
    if result.named is not None:
        details['named_witness'] = result.named.witness
    details.update(result.notes)
    counterexample = None if report.commutative else report.to_dict()
    params = config.params()
    params['composition'] = list(composition)
    return VerificationReport("adjoint-hecke", params, _verdict(report.commutative), None, None,
                              counterexample, details)


# == character engine ==
def run_chartab(config, storage):
    G = enumerate_group(GroupSpec.general_linear(config.n, config.q), config.bounds.order)
    classes = storage.class_table(G)
    prime = config.prime
    if prime is None:
        prime, _ = choose_prime(exponent(classes), classes.order)
    table = storage.char_table(classes, prime)
    second_prime, _ = choose_prime(exponent(classes), classes.order, after=prime)
    second = storage.char_table(classes, second_prime)
    self_dual = [table.contragredient(i) == i for i in range(len(table))]
    self_dual_second = [second.contragredient(i) == i for i in range(len(second))]
    checks = {'orthogonality': table.validate(),
              'degrees_reproduced': sorted(table.degrees) == sorted(second.degrees),
              'self_dual_reproduced': sorted(self_dual) == sorted(self_dual_second),
              'kappa_selfduality': kappa_selfduality_check(classes)}
    if config.composition is not None:
        M = enumerate_group(GroupSpec.levi(config.q, config.composition), config.bounds.order)
        table_M = storage.char_table(storage.class_table(M), prime)
        factors = [storage.char_table(storage.class_table(enumerate_group(GroupSpec.general_linear(m, config.q),
                                                                          config.bounds.order)), prime)
                   for m in config.composition]
        match_product_rows(table_M, factors)
        checks['product_factorization'] = True
    passed = all(checks.values())
    counterexample = None if passed else {'failed_checks': [name for name, ok in checks.items() if not ok]}
    details = dict(checks)
    details.update({'degrees': table.degrees, 'second_prime': second_prime})
    return VerificationReport("character-table", config.params(), _verdict(passed), prime, None,
                              counterexample, details)


DISPATCH = {'jacquet': run_jacquet,
            'thmgl': run_thmgl,
            'gelfand': run_gelfand,
            'geometry': run_geometry,
            'keylemma': run_keylemma,
            'dualkey': run_dualkey,
            'deligne': run_deligne,
            'nuimage': run_nuimage,
            'symgroup': run_symgroup,
            'hecke': run_hecke,
            'chartab': run_chartab}


def run(config, storage=None):
    config.validate()
    storage = storage if storage is not None else config.make_storage()
    hits, misses = storage.hits, storage.misses
    start = time.time()
    logger.info(" === %s %s === " % (config.command, str(config.params())))
    report = DISPATCH[config.command](config, storage)
    report.wall_time = round(time.time() - start, 3)
    report.cache_hits = storage.hits - hits
    report.cache_misses = storage.misses - misses
    logger.info("Verdict for %s: %s" % (report.claim, report.verdict.value))
    return report


def exit_status(report, expect_fail=False):
    """0 when the verdict is the expected one, 1 otherwise."""
    return 0 if report.passed != expect_fail else 1
