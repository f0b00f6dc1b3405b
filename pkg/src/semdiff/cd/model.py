"""Class diagrams, object models, and the conformance check between them.

The instance check is closed-world: an object of a class the diagram does
not declare is a violation, not an unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class CdValidationError(ValueError):
    """Structurally broken class diagram."""


class InheritanceCycleError(CdValidationError):
    pass


class DanglingReferenceError(CdValidationError):
    pass


class DuplicateNameError(CdValidationError):
    pass


class BadMultiplicityError(CdValidationError):
    pass


class OdValidationError(ValueError):
    """Structurally broken object model (duplicate ids, unknown link ends)."""


UNBOUNDED = -1  # hi sentinel: no upper bound


@dataclass(frozen=True)
class MultRange:
    """Multiplicity [lo..hi]; hi == UNBOUNDED means '*'."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 0:
            raise BadMultiplicityError(f"negative lower bound: {self.lo}")
        if self.hi != UNBOUNDED and self.hi < self.lo:
            raise BadMultiplicityError(f"empty multiplicity [{self.lo}..{self.hi}]")

    def contains(self, n: int) -> bool:
        return n >= self.lo and (self.hi == UNBOUNDED or n <= self.hi)

    def __str__(self) -> str:
        if self.lo == 0 and self.hi == UNBOUNDED:
            return "*"
        if self.hi == UNBOUNDED:
            return f"{self.lo}..*"
        if self.lo == self.hi:
            return str(self.lo)
        return f"{self.lo}..{self.hi}"


MANY = MultRange(0, UNBOUNDED)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    abstract: bool = False
    parent: str | None = None


@dataclass(frozen=True)
class Association:
    """Binary association.  side_a/side_b are (class name, multiplicity).

    mult_a bounds, for each object conforming to class_b, how many position-A
    partners it has; mult_b bounds position-B partners of class_a objects.
    """

    name: str
    class_a: str
    mult_a: MultRange
    class_b: str
    mult_b: MultRange


@dataclass(frozen=True)
class ClassDiagram:
    name: str
    classes: tuple[ClassDecl, ...]
    associations: tuple[Association, ...]

    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    def concrete_classes(self) -> list[str]:
        return [c.name for c in self.classes if not c.abstract]

    def decl(self, name: str) -> ClassDecl | None:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def association(self, name: str) -> Association | None:
        for a in self.associations:
            if a.name == name:
                return a
        return None


@dataclass(frozen=True)
class Link:
    association: str
    obj_a: str
    obj_b: str


@dataclass(frozen=True)
class ObjectModel:
    name: str
    objects: tuple[tuple[str, str], ...]  # (object id, class name)
    links: tuple[Link, ...]

    def class_of(self, obj_id: str) -> str | None:
        for oid, cls in self.objects:
            if oid == obj_id:
                return cls
        return None


def validate_cd(cd: ClassDiagram) -> ClassDiagram:
    """Reject duplicate names, dangling references, inheritance cycles."""
    seen: set[str] = set()
    for c in cd.classes:
        if c.name in seen:
            raise DuplicateNameError(f"class declared twice: {c.name}")
        seen.add(c.name)
    assoc_seen: set[str] = set()
    for a in cd.associations:
        if a.name in assoc_seen:
            raise DuplicateNameError(f"association declared twice: {a.name}")
        assoc_seen.add(a.name)
    for c in cd.classes:
        if c.parent is not None and c.parent not in seen:
            raise DanglingReferenceError(
                f"class {c.name} extends unknown class {c.parent}"
            )
    for a in cd.associations:
        for end in (a.class_a, a.class_b):
            if end not in seen:
                raise DanglingReferenceError(
                    f"association {a.name} references unknown class {end}"
                )
    # Walk parent chains; a chain longer than the class count must loop.
    for c in cd.classes:
        hops = 0
        cur: str | None = c.name
        while cur is not None:
            decl = cd.decl(cur)
            assert decl is not None
            cur = decl.parent
            hops += 1
            if hops > len(cd.classes):
                raise InheritanceCycleError(f"inheritance cycle through {c.name}")
    return cd


def validate_om(om: ObjectModel) -> ObjectModel:
    seen: set[str] = set()
    for oid, _ in om.objects:
        if oid in seen:
            raise OdValidationError(f"object declared twice: {oid}")
        seen.add(oid)
    links_seen: set[Link] = set()
    for ln in om.links:
        for end in (ln.obj_a, ln.obj_b):
            if end not in seen:
                raise OdValidationError(
                    f"link {ln.association} references unknown object {end}"
                )
        if ln in links_seen:
            raise OdValidationError(
                f"duplicate link {ln.association} {ln.obj_a} -- {ln.obj_b}"
            )
        links_seen.add(ln)
    return om


def conforms(cd: ClassDiagram, sub: str, sup: str) -> bool:
    """Reflexive-transitive subclassing; unknown classes conform to nothing."""
    cur: str | None = sub
    hops = 0
    while cur is not None and hops <= len(cd.classes):
        if cur == sup:
            return True
        decl = cd.decl(cur)
        if decl is None:
            return False
        cur = decl.parent
        hops += 1
    return False


@dataclass(frozen=True)
class Violation:
    kind: str  # unknown-class | abstract-class | unknown-association | endpoint | multiplicity
    message: str
    association: str | None = None
    obj: str | None = None


@dataclass(frozen=True)
class InstanceVerdict:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def check_instance(om: ObjectModel, cd: ClassDiagram) -> InstanceVerdict:
    """Full closed-world instance check with the complete violation list."""
    out: list[Violation] = []
    for oid, cls in om.objects:
        decl = cd.decl(cls)
        if decl is None:
            out.append(Violation("unknown-class", f"{oid} : {cls} is not declared in {cd.name}", obj=oid))
        elif decl.abstract:
            out.append(Violation("abstract-class", f"{oid} instantiates abstract class {cls}", obj=oid))

    for ln in om.links:
        asc = cd.association(ln.association)
        if asc is None:
            out.append(Violation("unknown-association",
                                 f"link {ln.association} is not declared in {cd.name}",
                                 association=ln.association))
            continue
        ca = om.class_of(ln.obj_a)
        cb = om.class_of(ln.obj_b)
        if ca is None or not conforms(cd, ca, asc.class_a):
            out.append(Violation("endpoint",
                                 f"{ln.obj_a} does not conform to {asc.class_a} "
                                 f"(position A of {asc.name})",
                                 association=asc.name, obj=ln.obj_a))
        if cb is None or not conforms(cd, cb, asc.class_b):
            out.append(Violation("endpoint",
                                 f"{ln.obj_b} does not conform to {asc.class_b} "
                                 f"(position B of {asc.name})",
                                 association=asc.name, obj=ln.obj_b))

    # Multiplicities.  A self-link counts once per position.
    for asc in cd.associations:
        links = [ln for ln in om.links if ln.association == asc.name]
        for oid, cls in om.objects:
            if conforms(cd, cls, asc.class_a):
                n = sum(1 for ln in links if ln.obj_a == oid)
                if not asc.mult_b.contains(n):
                    out.append(Violation(
                        "multiplicity",
                        f"{oid} has {n} {asc.class_b} partner(s) via {asc.name}, "
                        f"multiplicity is [{asc.mult_b}]",
                        association=asc.name, obj=oid))
            if conforms(cd, cls, asc.class_b):
                n = sum(1 for ln in links if ln.obj_b == oid)
                if not asc.mult_a.contains(n):
                    out.append(Violation(
                        "multiplicity",
                        f"{oid} has {n} {asc.class_a} partner(s) via {asc.name}, "
                        f"multiplicity is [{asc.mult_a}]",
                        association=asc.name, obj=oid))
    return InstanceVerdict(not out, tuple(out))


def is_instance(om: ObjectModel, cd: ClassDiagram) -> bool:
    return check_instance(om, cd).ok


def classes_of(om: ObjectModel) -> tuple[str, ...]:
    """Sorted names of the classes the model instantiates."""
    return tuple(sorted({cls for _, cls in om.objects}))
