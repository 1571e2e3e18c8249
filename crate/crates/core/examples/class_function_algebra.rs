//! Products, decompositions, kernels, centers and restrictions of characters.

use std::sync::Arc;

use charforge::charops::{
    char_center, decompose, inner_product, is_fully_ramified, is_irreducible_on, kernel, multiple_of_irreducible,
    pointwise_product, ClassFunction,
};
use charforge::chartable::character_table;
use charforge::groupkit::{build_group, parse_group_spec, sylow_subgroup, DEFAULT_SIZE_CAP};

fn main() {
    for text in ["quaternion(2)", "heisenberg(3)", "symmetric(3)"] {
        let g = build_group(&parse_group_spec(text).unwrap(), DEFAULT_SIZE_CAP).unwrap();
        let t = character_table(Arc::new(g)).unwrap();
        let g = t.group();
        let top = t.len() - 1;
        let chi = t.character(top);
        println!("{text}: top character has degree {}", chi.degree());

        let square = pointwise_product(chi, chi);
        println!("  chi^2 decomposes as {:?}", decompose(&square, &t).unwrap());
        match multiple_of_irreducible(&square, &t).unwrap() {
            Some((m, i)) => println!("  chi^2 = {m} * chi{i}"),
            None => println!("  chi^2 is not a multiple of one irreducible"),
        }

        println!("  |ker chi| = {}, |Z(chi)| = {}", kernel(g, chi).order, char_center(g, chi).order);
        match is_fully_ramified(g, chi) {
            Ok(r) => println!("  fully ramified over Z(G): {}", r.holds()),
            Err(e) => println!("  fully ramified: {e}"),
        }

        let regular = ClassFunction::regular(g);
        println!("  [reg, chi] = {}", inner_product(g, &regular, chi).unwrap());

        let p = *charforge::gflin::prime_factors(g.order() as u64).last().unwrap();
        let sylow = sylow_subgroup(g, p);
        println!("  irreducible on a Sylow {p}-subgroup: {}", is_irreducible_on(g, chi, &sylow).unwrap());
    }
}
