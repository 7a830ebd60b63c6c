//! Which of the five maximal clones contain each two-element groupoid.

use pspec::clone::post::post_classes;
use pspec::clone::primality::{primal_by_cardinality, primal_by_post_test};
use pspec::{builtin_algebra, BuiltinSpec};

fn main() -> pspec::Result<()> {
    for i in 0..16 {
        let a = builtin_algebra(&BuiltinSpec::parse(&format!("groupoid2:{i}"))?)?;
        let post = primal_by_post_test(&a)?;
        let count = primal_by_cardinality(&a, 1 << 20)?;
        assert_eq!(post.is_primal(), count.is_primal());
        println!("{i:>2} {} {:<16} primal={}", a.ops()[0].table, post_classes(&a)?, post.is_primal());
    }
    Ok(())
}
