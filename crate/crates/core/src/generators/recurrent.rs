use crate::alphabet::{Alphabet, Symbol};
use crate::error::{domain, Result};
use crate::sequence::{Provenance, SequenceKind, SymbolicSequence};

use super::ruler_family::{Content, Piece, RulerFamily, Tail};
use super::schedule::ExponentSchedule;
use super::MinimalSystem;

/// `j^∞ . B_{ω_1} B_{ω_2} ⋯` with `B_k = 1^{n_k^1} 2^{n_k^2} ⋯ j^{n_k^j}` over the alphabet `{1..j}`.
pub fn recurrent_sharp_family(schedule: &ExponentSchedule) -> Result<SymbolicSequence> {
    if schedule.i() != 0 {
        return domain("recurrent sharp family needs a schedule with i = 0");
    }
    let j = schedule.j();
    let alphabet = Alphabet::one_based(j);
    let blocks: Vec<Vec<Piece>> = (1..=schedule.generations())
        .map(|k| {
            (1..=j)
                .map(|p| Piece { len: schedule.entry(k, p), content: Content::Run(Symbol(p as u8 - 1)) })
                .collect()
        })
        .collect();
    let prov = Provenance::new(
        "recurrent-sharp",
        serde_json::json!({
            "j": j,
            "g": schedule.g().tag(),
            "margin": schedule.margin(),
            "schedule": schedule.to_json(),
        }),
    );
    let minimal = (0..j as u8).map(|p| MinimalSystem::Periodic { cycle: vec![Symbol(p)].into() }).collect();
    let fam = RulerFamily::new(blocks, Tail::Constant(Symbol(j as u8 - 1)), Vec::new(), alphabet.clone(), prov.clone());
    Ok(SymbolicSequence::new(fam, SequenceKind::BiInfinite, alphabet, prov).with_minimal_systems(minimal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::growth::GrowthFunction;
    use crate::generators::ruler::ruler;
    use crate::generators::schedule::make_schedule;
    use crate::sequence::shift;

    #[test]
    fn matches_direct_expansion() {
        let s = make_schedule(2, 0, &GrowthFunction::linear(1), 1).unwrap();
        let x = recurrent_sharp_family(&s).unwrap();
        let mut direct = String::new();
        let mut b = 1u64;
        while direct.len() < 5000 {
            let k = ruler(b) as usize;
            for p in 1..=2 {
                let n = s.entry(k, p).finite().unwrap();
                direct.push_str(&p.to_string().repeat(n as usize));
            }
            b += 1;
        }
        assert_eq!(x.render(0, 4999).unwrap(), direct[..5000]);
        assert_eq!(x.render(-5, -1).unwrap(), "22222");
    }

    #[test]
    fn shift_by_one_moves_windows() {
        let s = make_schedule(3, 0, &GrowthFunction::sqrt(), 1).unwrap();
        let x = recurrent_sharp_family(&s).unwrap();
        let y = shift(&x, 1).unwrap();
        assert_eq!(y.window(-1, 98).unwrap(), x.window(0, 99).unwrap());
    }

    #[test]
    fn beyond_cap_runs_are_infinite() {
        let s = make_schedule(2, 0, &GrowthFunction::log2(), 1).unwrap();
        let x = recurrent_sharp_family(&s).unwrap();
        // blocks: (1^2 2^5)(1^{2^28+1} 2^∞)
        assert_eq!(x.render(0, 6).unwrap(), "1122222");
        assert_eq!(x.symbol_at(7 + (1 << 28)), Symbol(0));
        assert_eq!(x.symbol_at(7 + (1 << 28) + 1), Symbol(1));
        assert_eq!(x.symbol_at(1 << 61), Symbol(1));
    }
}
