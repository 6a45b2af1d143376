//! Built-in representations used by the consistency checks and the CLI.

use crate::interval::Interval;
use crate::opfunc::measure::MeasureOnLine;
use crate::opfunc::rep::{ConvexIntegralRep, IntegralRep, MonotoneRep, StrongConvexRep};
use crate::scalar::Scalar;

/// A named representation with a bounded interval to draw test spectra from,
/// and (for some entries) an independent closed form.
#[derive(Debug, Clone)]
pub struct CorpusEntry<T: Scalar> {
    pub name: &'static str,
    pub rep: IntegralRep<T>,
    pub sampling: Interval<T>,
    pub closed_form: Option<fn(T) -> T>,
}

fn inv<T: Scalar>(x: T) -> T {
    x.recip()
}

fn frac<T: Scalar>(x: T) -> T {
    x / (x + T::one())
}

fn square<T: Scalar>(x: T) -> T {
    x * x
}

pub fn corpus<T: Scalar>() -> Vec<CorpusEntry<T>> {
    let l = T::lit;
    let zero = MeasureOnLine::<T>::zero;
    let pos = Interval::open_above(T::zero());
    let mut out = Vec::new();
    let mut push = |name, rep, sampling, closed_form| {
        out.push(CorpusEntry {
            name,
            rep,
            sampling,
            closed_form,
        })
    };

    push(
        "convex: x^2",
        IntegralRep::Convex(ConvexIntegralRep::new(T::one(), T::zero(), T::zero(), T::zero(), Interval::real_line(), zero(), zero()).unwrap()),
        Interval::closed(l(-2.0), l(2.0)),
        Some(square::<T> as fn(T) -> T),
    );
    // (x−1)²/x = x − 2 + 1/x, so 1/x = that − x + 2.
    push(
        "convex: 1/x",
        IntegralRep::Convex(ConvexIntegralRep::new(T::zero(), -T::one(), l(2.0), T::one(), pos, MeasureOnLine::atom(T::zero(), T::one()), zero()).unwrap()),
        Interval::closed(l(0.5), l(2.0)),
        Some(inv::<T> as fn(T) -> T),
    );
    push(
        "convex: two-sided pieces",
        IntegralRep::Convex(
            ConvexIntegralRep::new(
                l(0.25),
                l(-0.5),
                l(1.0),
                l(0.1),
                Interval::open(l(-1.0), l(1.0)),
                MeasureOnLine {
                    atoms: vec![(l(-1.5), l(0.3))],
                    pieces: vec![(l(-3.0), l(-1.0), l(0.8))],
                },
                MeasureOnLine {
                    atoms: vec![(l(2.0), l(1.1))],
                    pieces: vec![(l(1.2), l(2.5), l(0.6))],
                },
            )
            .unwrap(),
        ),
        Interval::closed(l(-0.9), l(0.9)),
        None,
    );
    push(
        "strong: 1/x",
        IntegralRep::Strong(StrongConvexRep::new(T::zero(), pos, MeasureOnLine::atom(T::zero(), T::one()), zero()).unwrap()),
        Interval::closed(l(0.5), l(2.0)),
        Some(inv::<T> as fn(T) -> T),
    );
    push(
        "strong: log((x+2)/(x+1))",
        IntegralRep::Strong(StrongConvexRep::new(T::zero(), pos, MeasureOnLine::piece(l(-2.0), l(-1.0), T::one()), zero()).unwrap()),
        Interval::closed(l(0.1), l(3.0)),
        None,
    );
    push(
        "strong: resolvents on both sides",
        IntegralRep::Strong(
            StrongConvexRep::new(
                l(0.5),
                Interval::open(l(-1.0), l(1.0)),
                MeasureOnLine::atom(l(-2.0), T::one()),
                MeasureOnLine {
                    atoms: vec![(l(2.0), l(0.7))],
                    pieces: vec![(l(1.5), l(4.0), l(0.4))],
                },
            )
            .unwrap(),
        ),
        Interval::closed(l(-0.9), l(0.9)),
        None,
    );
    push(
        "monotone: x/(x+1)",
        IntegralRep::Monotone(MonotoneRep::new(T::zero(), T::zero(), T::zero(), Interval::open_above(-T::one()), MeasureOnLine::atom(-T::one(), T::one()), zero()).unwrap()),
        Interval::closed(l(-0.5), l(3.0)),
        Some(frac::<T> as fn(T) -> T),
    );
    push(
        "monotone: identity",
        IntegralRep::Monotone(MonotoneRep::new(T::one(), T::zero(), T::zero(), Interval::real_line(), zero(), zero()).unwrap()),
        Interval::closed(l(-2.0), l(2.0)),
        None,
    );
    push(
        "monotone: pieces and atoms",
        IntegralRep::Monotone(
            MonotoneRep::new(
                l(0.3),
                l(-0.2),
                T::one(),
                Interval::open(l(-1.0), l(3.0)),
                MeasureOnLine::piece(l(-2.0), l(-1.0), T::one()),
                MeasureOnLine::atom(l(3.0), l(0.5)),
            )
            .unwrap(),
        ),
        Interval::closed(l(-0.8), l(2.8)),
        None,
    );
    out
}
