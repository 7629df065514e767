//! Known coincidences, written as pedigree terms over point seeds.

use super::term::Term;
use crate::geometry::Gender;

fn parse(text: &str) -> Term {
    Term::parse(text, Gender::Point).expect("fixture text is well formed")
}

/// The named four-seed family, generations 2 to 4.
pub mod family {
    use super::*;

    pub fn abel() -> Term {
        parse("SonOf(Eve_{1,2},Eve_{3,4})")
    }
    pub fn cain() -> Term {
        parse("SonOf(Eve_{1,3},Eve_{2,4})")
    }
    pub fn seth() -> Term {
        parse("SonOf(Eve_{1,4},Eve_{2,3})")
    }
    pub fn sara() -> Term {
        Term::birth(abel(), cain())
    }
    pub fn rivka() -> Term {
        Term::birth(abel(), seth())
    }
    pub fn lea() -> Term {
        Term::birth(cain(), seth())
    }
    pub fn reuven() -> Term {
        Term::birth(Term::eve(1, 2), lea())
    }
    pub fn shimon() -> Term {
        Term::birth(Term::eve(1, 3), rivka())
    }
    pub fn levi() -> Term {
        Term::birth(Term::eve(1, 4), sara())
    }
    pub fn yehuda() -> Term {
        Term::birth(Term::eve(2, 3), sara())
    }
    pub fn dan() -> Term {
        Term::birth(Term::eve(2, 4), rivka())
    }
    pub fn naphtali() -> Term {
        Term::birth(Term::eve(3, 4), lea())
    }
}

/// The four collinear triples among the generation-4 points of four seeds.
pub fn trilinear_polar_triples() -> Vec<[Term; 3]> {
    use family::*;
    vec![
        [reuven(), shimon(), yehuda()],
        [reuven(), levi(), dan()],
        [shimon(), levi(), naphtali()],
        [yehuda(), dan(), naphtali()],
    ]
}

/// The four concurrency facts for five seeds.
pub fn five_adam_triples() -> Vec<[Term; 3]> {
    let triple = |a: &str, b: &str, c: &str| [parse(a), parse(b), parse(c)];
    vec![
        triple(
            "Eve_{1,2}",
            "DaughterOf(SonOf(Eve_{1,3},Eve_{4,5}),SonOf(Eve_{2,4},Eve_{3,5}))",
            "DaughterOf(SonOf(Eve_{1,4},Eve_{3,5}),SonOf(Eve_{2,3},Eve_{4,5}))",
        ),
        triple(
            "DaughterOf(Adam_1,SonOf(Eve_{2,3},Eve_{4,5}))",
            "DaughterOf(Adam_2,SonOf(Eve_{1,4},Eve_{3,5}))",
            "DaughterOf(Adam_5,SonOf(Eve_{1,3},Eve_{2,4}))",
        ),
        triple(
            "DaughterOf(Adam_1,SonOf(Eve_{2,3},Eve_{4,5}))",
            "DaughterOf(SonOf(Eve_{1,2},Eve_{3,4}),SonOf(Eve_{1,3},Eve_{2,5}))",
            "DaughterOf(SonOf(Eve_{1,4},Eve_{2,5}),SonOf(Eve_{1,5},Eve_{3,4}))",
        ),
        triple(
            "DaughterOf(SonOf(Eve_{1,2},Eve_{3,4}),SonOf(Eve_{1,3},Eve_{2,4}))",
            "DaughterOf(SonOf(Eve_{1,2},Eve_{3,5}),SonOf(Eve_{1,3},Eve_{2,5}))",
            "DaughterOf(SonOf(Eve_{2,4},Eve_{3,5}),SonOf(Eve_{2,5},Eve_{3,4}))",
        ),
    ]
}

/// Opposite-side intersections of the hexagon 1-2-...-6; collinear when the seeds lie on a conic.
pub fn pascal_triple() -> [Term; 3] {
    [
        parse("SonOf(Eve_{1,2},Eve_{3,4})"),
        parse("SonOf(Eve_{1,5},Eve_{3,6})"),
        parse("SonOf(Eve_{2,6},Eve_{4,5})"),
    ]
}

/// All permutations of `1..=n`, in lexicographic order.
pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, n: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n as usize {
            out.push(prefix.clone());
            return;
        }
        for i in 1..=n {
            if !prefix.contains(&i) {
                prefix.push(i);
                extend(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, &mut out);
    out
}
