"""
Membership verdicts for the monoid generated by idempotent CA.

A CA outside the monoid is caught either by being onto without being the
identity, or by a period n on which it acts onto but not identically. Inside
the monoid, sufficient conditions give certificates. Everything else is
reported as consistent up to the scanned bound.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from services.ca_core import (
    CA, compose, equals, eventual_idempotency_scan, identity_ca, is_constant_on_unary, is_constant_table,
    is_idempotent, minimal_neighborhood, spreading_states,
)
from services.language_analysis import is_surjective
from services.periodic_dynamics import eq1_check, eq1_check_up_to, temporally_periodic_points

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    IN = 'In'
    OUT = 'Out'
    CONSISTENT_UP_TO = 'ConsistentUpTo'


class Certificate(str, Enum):
    IDENTITY = 'Identity'
    IDEMPOTENT = 'Idempotent'
    EVENTUALLY_IDEMPOTENT = 'EventuallyIdempotent'
    SPREADING_CONSTANT_UNARY = 'SpreadingConstantUnary'
    SINGLE_PERIODIC_POINT = 'SinglePeriodicPoint'


class Witness(str, Enum):
    SURJECTIVE_NON_IDENTITY = 'SurjectiveNonIdentity'
    EQ1_VIOLATION = 'Eq1Violation'


@dataclass
class MembershipVerdict:
    kind: VerdictKind
    bound: int
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def inside(cls, certificate: Certificate, bound: int, **details) -> 'MembershipVerdict':
        return cls(VerdictKind.IN, bound, certificate=certificate, details=details)

    @classmethod
    def outside(cls, witness: Witness, bound: int, **details) -> 'MembershipVerdict':
        return cls(VerdictKind.OUT, bound, witness=witness, details=details)

    @property
    def label(self) -> str:
        """Short form such as In(EventuallyIdempotent(2)) or Out(Eq1Violation(2, 01))"""
        if self.kind is VerdictKind.CONSISTENT_UP_TO:
            return f"ConsistentUpTo({self.bound})"
        if self.kind is VerdictKind.OUT:
            if self.witness is Witness.EQ1_VIOLATION:
                return f"Out(Eq1Violation({self.details['n']}, {self.details['point']}))"
            return f"Out({self.witness.value})"
        if self.certificate is Certificate.EVENTUALLY_IDEMPOTENT:
            return f"In(EventuallyIdempotent({self.details['m']}))"
        return f"In({self.certificate.value})"

    def __str__(self) -> str:
        return self.label


# Result each verdict instantiates, named in the report
RESULTS = {
    Witness.SURJECTIVE_NON_IDENTITY: "characterization, surjective case: a member that is onto is the identity",
    Witness.EQ1_VIOLATION: "characterization, periodic case: a member that maps Q_n onto itself "
                           "is the identity on Q_n",
    Certificate.IDENTITY: "generators: the identity is the empty product",
    Certificate.IDEMPOTENT: "generators: every idempotent CA is a product of one factor",
    Certificate.EVENTUALLY_IDEMPOTENT: "sufficient condition: eventually idempotent CA are members",
    Certificate.SPREADING_CONSTANT_UNARY: "sufficient condition: a spreading state with neighborhood size "
                                          "at least 2 and a constant action on unary points",
    Certificate.SINGLE_PERIODIC_POINT: "sufficient condition: a non-surjective CA with a single spatially "
                                       "and temporally periodic point",
    VerdictKind.CONSISTENT_UP_TO: "characterization: non-surjective and the periodic case for every n",
}


def decide_membership(ca: CA, bound: int, budget: int = None) -> MembershipVerdict:
    """
    Stages: identity, a bounded scan for a period acted on onto but not
    identically, surjectivity, then the certificates in a fixed order.
    The period scan runs before surjectivity so that onto CA such as shifts
    report the period that exposes them.
    """
    if bound < 1:
        raise ValueError(f"bound must be positive, got {bound}")

    if equals(ca, identity_ca(ca.alphabet), budget):
        return MembershipVerdict.inside(Certificate.IDENTITY, bound)

    violation = eq1_check_up_to(ca, bound, budget)
    if violation is not None:
        logger.info(f"{ca}: Q_{violation.n} is mapped onto itself but {violation.violation_witness} moves")
        return MembershipVerdict.outside(
            Witness.EQ1_VIOLATION, bound, n=violation.n, point=str(violation.violation_witness),
        )

    if is_surjective(ca, budget):
        return MembershipVerdict.outside(Witness.SURJECTIVE_NON_IDENTITY, bound)

    if is_idempotent(ca, budget):
        return MembershipVerdict.inside(Certificate.IDEMPOTENT, bound)

    scan = eventual_idempotency_scan(ca, bound, budget)
    if scan.m is not None:
        return MembershipVerdict.inside(
            Certificate.EVENTUALLY_IDEMPOTENT, bound, m=scan.m,
            nilpotent=is_constant_table(scan.stable_power, budget),
        )

    spreading = spreading_states(ca, budget)
    if spreading and len(minimal_neighborhood(ca, budget)) >= 2 and is_constant_on_unary(ca):
        return MembershipVerdict.inside(
            Certificate.SPREADING_CONSTANT_UNARY, bound, spreading=sorted(spreading),
        )

    periodic = temporally_periodic_points(ca, bound, budget)
    if len(periodic) == 1:
        return MembershipVerdict.inside(
            Certificate.SINGLE_PERIODIC_POINT, bound, point=str(periodic[0]), checked_up_to=bound,
        )

    logger.info(f"{ca}: no verdict up to period {bound}")
    return MembershipVerdict(
        VerdictKind.CONSISTENT_UP_TO, bound,
        details={'powers_checked': scan.checked_up_to, 'power_scan_stopped': scan.stopped_early},
    )


def verify_verdict(ca: CA, verdict: MembershipVerdict, budget: int = None) -> bool:
    """Re-check the witness or certificate of a verdict from scratch"""
    if verdict.kind is VerdictKind.CONSISTENT_UP_TO:
        return eq1_check_up_to(ca, verdict.bound, budget) is None

    if verdict.kind is VerdictKind.OUT:
        if verdict.witness is Witness.SURJECTIVE_NON_IDENTITY:
            return is_surjective(ca, budget) and not equals(ca, identity_ca(ca.alphabet), budget)
        report = eq1_check(ca, verdict.details['n'], budget)
        return report.maps_onto and report.violation_witness is not None

    certificate = verdict.certificate
    if certificate is Certificate.IDENTITY:
        return equals(ca, identity_ca(ca.alphabet), budget)
    if certificate is Certificate.IDEMPOTENT:
        return equals(compose(ca, ca, budget), ca, budget)
    if certificate is Certificate.EVENTUALLY_IDEMPOTENT:
        m = verdict.details['m']
        return eventual_idempotency_scan(ca, m, budget).m == m
    if certificate is Certificate.SPREADING_CONSTANT_UNARY:
        return (bool(spreading_states(ca, budget)) and len(minimal_neighborhood(ca, budget)) >= 2
                and is_constant_on_unary(ca))
    periodic = temporally_periodic_points(ca, verdict.details['checked_up_to'], budget)
    return len(periodic) == 1 and not is_surjective(ca, budget)


def explain(verdict: MembershipVerdict) -> List[str]:
    """Stable text report naming the result that justifies the verdict"""
    lines = [f"verdict: {verdict.label}"]
    if verdict.kind is VerdictKind.OUT:
        lines.append(f"result: {RESULTS[verdict.witness]}")
        if verdict.witness is Witness.SURJECTIVE_NON_IDENTITY:
            lines.append("witness: the CA is surjective and not the identity")
        else:
            lines.append(f"witness: period {verdict.details['n']} is mapped onto itself, "
                         f"but the point {verdict.details['point']} is moved")
        lines.append("membership: refuted")
        return lines

    if verdict.kind is VerdictKind.CONSISTENT_UP_TO:
        lines.append(f"result: {RESULTS[VerdictKind.CONSISTENT_UP_TO]}")
        lines.append(f"no period n <= {verdict.bound} is mapped onto itself non-identically, "
                     "the CA is not surjective, and no sufficient condition applies")
        if verdict.details.get('power_scan_stopped'):
            lines.append(f"note: powers compared only up to m={verdict.details['powers_checked']} "
                         "within the window budget")
        lines.append("membership: NOT certified (the condition quantifies over every period)")
        return lines

    certificate = verdict.certificate
    lines.append(f"result: {RESULTS[certificate]}")
    if certificate is Certificate.IDENTITY:
        lines.append("certificate: the CA is the identity")
    elif certificate is Certificate.IDEMPOTENT:
        lines.append("certificate: G^2 = G")
    elif certificate is Certificate.EVENTUALLY_IDEMPOTENT:
        m = verdict.details['m']
        lines.append(f"certificate: G^{m + 1} = G^{m}")
        if verdict.details.get('nilpotent'):
            lines.append(f"certificate: G^{m} is constant, so G is nilpotent")
    elif certificate is Certificate.SPREADING_CONSTANT_UNARY:
        symbols = ', '.join(str(symbol) for symbol in verdict.details['spreading'])
        lines.append(f"certificate: spreading state(s) {symbols}, constant on unary points")
    else:
        lines.append(f"certificate: {verdict.details['point']} is the only spatially and temporally "
                     f"periodic point of period <= {verdict.details['checked_up_to']} and the CA is not surjective")
        lines.append("note: bounded check; the sufficient condition quantifies over all periodic points")
    lines.append("membership: certified")
    return lines
