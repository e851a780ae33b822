"""Conversion between engine objects and their JSON documents"""

from typing import Optional

from pisigma.algebra.context import get_context
from pisigma.construction.atoms import rational_value
from pisigma.evaluation.ev import entry
from pisigma.evaluation.render import to_expression
from pisigma.evaluation.spec import EvalSpec
from pisigma.expr.parser import parse
from pisigma.expr.printer import pretty
from pisigma.field.tower import Tower
from pisigma.recurrences.model import Certificate, Recurrence
from pisigma.schemas import (
    CertificateDocument,
    GeneratorDocument,
    ParamDecl,
    RecurrenceDocument,
    TowerDocument,
)


def tower_document(tower: Tower, spec: EvalSpec) -> TowerDocument:
    generators = []
    for gen in tower.gens:
        data = entry(tower, spec, gen)
        doc = GeneratorDocument(
            name=gen.name,
            kind=gen.kind.value,
            lower=data.lower,
            display=pretty(data.display) if data.display is not None else None,
        )
        if gen.is_pi:
            doc.ratio = str(gen.ratio.as_expr())
        else:
            summand = gen.summand
            doc.summand = pretty(to_expression(summand.tower, spec, summand, symbolic=True))
        generators.append(doc)
    return TowerDocument(
        var=tower.ctx.var,
        params=list(tower.ctx.params),
        generators=generators,
        has_sign=tower.has_sign,
    )


def certificate_document(certificate: Certificate) -> CertificateDocument:
    return CertificateDocument(
        index=certificate.index,
        summand=pretty(certificate.summand),
        coefficients=[pretty(c) for c in certificate.coefficients],
        antidifference=pretty(certificate.antidifference),
        lower=certificate.lower,
    )


def recurrence_document(recurrence: Recurrence) -> RecurrenceDocument:
    certificate: Optional[CertificateDocument] = None
    if recurrence.certificate is not None:
        certificate = certificate_document(recurrence.certificate)
    return RecurrenceDocument(
        unknown=recurrence.unknown,
        var=recurrence.var,
        params=[ParamDecl(name=p.name, lower=p.lower, upper=p.upper) for p in recurrence.params],
        order=recurrence.order,
        coefficients=[pretty(c) for c in recurrence.coefficient_exprs()],
        rhs=pretty(recurrence.rhs),
        validity=recurrence.validity,
        certificate=certificate,
    )


def recurrence_from_document(doc: RecurrenceDocument) -> Recurrence:
    """
    Rebuild a recurrence from its document.

    Raises:
        ParseError: a stored expression does not parse
        ValidationError: an expression uses undeclared symbols
    """
    params = tuple(p.to_bound() for p in doc.params)
    names = [doc.var] + [p.name for p in params]
    ctx = get_context(doc.var, tuple(p.name for p in params))
    coefficients = tuple(rational_value(ctx, parse(text, names)) for text in doc.coefficients)
    certificate = None
    if doc.certificate is not None:
        cert = doc.certificate
        certificate = Certificate(
            index=cert.index,
            summand=parse(cert.summand, names + [cert.index]),
            coefficients=tuple(parse(text, names) for text in cert.coefficients),
            antidifference=parse(cert.antidifference, names + [cert.index]),
            lower=cert.lower,
        )
    return Recurrence(
        unknown=doc.unknown,
        var=doc.var,
        params=params,
        coefficients=coefficients,
        rhs=parse(doc.rhs, names),
        validity=doc.validity,
        certificate=certificate,
    )
