/// One summand `coef · [s₁, …, sₖ]` where each slot `sᵢ` is the sum of
/// the listed input positions (0-based).
#[derive(Clone, Copy, Debug)]
pub struct Term {
    pub coef: i64,
    pub slots: &'static [&'static [usize]],
}

pub type Formula = [Term];

const fn t(coef: i64, slots: &'static [&'static [usize]]) -> Term {
    Term { coef, slots }
}

static D0_PAIR: [Term; 3] = [t(1, &[&[0, 1]]), t(-1, &[&[0]]), t(-1, &[&[1]])];

static D1_PAIR: [Term; 2] = [t(1, &[&[0], &[1]]), t(-1, &[&[1], &[0]])];

static D1_TRIPLE: [Term; 4] = [
    t(1, &[&[0, 1], &[2]]),
    t(-1, &[&[0], &[1, 2]]),
    t(1, &[&[0], &[1]]),
    t(-1, &[&[1], &[2]]),
];

static D2_QUAD: [Term; 5] = [
    t(1, &[&[0], &[1], &[2]]),
    t(1, &[&[0], &[1, 2], &[3]]),
    t(1, &[&[1], &[2], &[3]]),
    t(-1, &[&[0, 1], &[2], &[3]]),
    t(-1, &[&[0], &[1], &[2, 3]]),
];

static D2_TRIPLE: [Term; 6] = [
    t(1, &[&[1], &[2], &[0]]),
    t(1, &[&[0], &[1, 2]]),
    t(1, &[&[0], &[1], &[2]]),
    t(-1, &[&[0], &[2]]),
    t(-1, &[&[1], &[0], &[2]]),
    t(-1, &[&[0], &[1]]),
];

static D3_QUINT: [Term; 6] = [
    t(1, &[&[1], &[2], &[3], &[4]]),
    t(1, &[&[0], &[1, 2], &[3], &[4]]),
    t(1, &[&[0], &[1], &[2], &[3, 4]]),
    t(-1, &[&[0], &[1], &[2, 3], &[4]]),
    t(-1, &[&[0], &[1], &[2], &[3]]),
    t(-1, &[&[0, 1], &[2], &[3], &[4]]),
];

// The printed signs of [p2,p1,p3,p4] and [p2,p3,p1,p4] are swapped here;
// with the printed signs D2 D3 does not vanish.
static D3_QUAD: [Term; 8] = [
    t(1, &[&[0], &[1], &[2], &[3]]),
    t(1, &[&[0], &[1], &[2, 3]]),
    t(1, &[&[0], &[2], &[3]]),
    t(-1, &[&[1], &[0], &[2], &[3]]),
    t(-1, &[&[0], &[1, 2], &[3]]),
    t(-1, &[&[1], &[2], &[3], &[0]]),
    t(1, &[&[1], &[2], &[0], &[3]]),
    t(-1, &[&[0], &[1], &[2]]),
];

/// `Dⱼ` on a generator of the given arity, if defined.
pub fn formula(j: usize, arity: usize) -> Option<&'static Formula> {
    Some(match (j, arity) {
        (0, 2) => &D0_PAIR,
        (1, 2) => &D1_PAIR,
        (1, 3) => &D1_TRIPLE,
        (2, 4) => &D2_QUAD,
        (2, 3) => &D2_TRIPLE,
        (3, 5) => &D3_QUINT,
        (3, 4) => &D3_QUAD,
        _ => return None,
    })
}
