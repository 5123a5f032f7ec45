//! Sliding block codes: a rule table, the length contract on words, coherence with sequences, and composition.
//!
//! `cargo run --release --example block_map_basics`

use std::collections::HashMap;

use subshift::blockmap::{apply_to_sequence, apply_to_word, compose, BlockMap};
use subshift::generators::{sturmian, SturmianParams};
use subshift::{Alphabet, Symbol};

fn main() -> subshift::Result<()> {
    let a = Alphabet::digits(2);
    // f(x)_i = x_i xor x_{i+1}: memory 0, anticipation 1
    let table: HashMap<Vec<Symbol>, Symbol> = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(p, q)| (vec![Symbol(p), Symbol(q)], Symbol(p ^ q)))
        .collect();
    let f = BlockMap::from_table(0, 1, a.clone(), a.clone(), table, false)?;
    // g(x)_i = x_{i-1} (a one-step delay): memory 1, anticipation 0
    let g = BlockMap::new(1, 0, a.clone(), a.clone(), "delay", |w| Some(w[0]));

    let w = a.parse("0010111")?;
    println!("f({}) = {}  (|w| − m − a = {})", a.render(&w), a.render(&apply_to_word(&f, &w)?), w.len() - f.width() + 1);
    println!("f on a word shorter than its window: {}", apply_to_word(&f, &a.parse("0")?).is_err());

    let x = sturmian(SturmianParams::golden())?;
    let fx = apply_to_sequence(&f, &x)?;
    println!("x      = {}", x.render(-5, 30)?);
    println!("f(x)   = {}", fx.render(-5, 30)?);
    let direct = apply_to_word(&f, &x.window(-5, 31)?)?;
    println!("f on the word x[-5..31] agrees with f(x)[-5..30]: {}", direct == fx.window(-5, 30)?);

    let gf = compose(&g, &f)?;
    let seq = apply_to_sequence(&g, &fx)?;
    let one = apply_to_sequence(&gf, &x)?;
    println!("g∘f has memory {} and anticipation {}", gf.memory(), gf.anticipation());
    println!("(g∘f)(x) = g(f(x)) on [−10^4, 10^4]: {}", one.window(-10_000, 10_000)? == seq.window(-10_000, 10_000)?);
    Ok(())
}
