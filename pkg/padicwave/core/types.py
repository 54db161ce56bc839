from fractions import Fraction

type Caps = tuple[int | None, ...]
type Block = tuple[tuple[int, ...], ...]
type Rational = Fraction | int
