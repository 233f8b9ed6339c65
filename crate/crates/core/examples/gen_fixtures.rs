//! Regenerates the JSON fixture files at the workspace root.
//!
//!     cargo run -p shiftlab-core --example gen_fixtures

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use shiftlab_core::cohomology::CylFunction;
use shiftlab_core::io::{
    self, CocyclePairFile, CocyclesFile, MapSpecFile, MapsFile, OverrideFile, PointFile,
};
use shiftlab_core::presentation::{fixtures, MatrixKind, Presentation};

fn depth1(p: &Presentation, pairs: &[(&str, i64)]) -> CylFunction {
    shiftlab_core::stab::by_first_symbol(p, pairs).unwrap()
}

fn depth_n(p: &Presentation, depth: usize, default: i64, special: &[(&str, i64)]) -> CylFunction {
    let mut values = BTreeMap::new();
    for w in p.words_of_length(depth) {
        values.insert(w, default);
    }
    for (word, v) in special {
        let w = p.alphabet.tokenize(word).unwrap();
        assert!(values.insert(w, *v).is_some(), "{word} must be admissible");
    }
    CylFunction::new(p, depth, values).unwrap()
}

fn constant(p: &Presentation, c: i64) -> CylFunction {
    CylFunction::constant(p, c)
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) {
    let text = serde_json::to_string_pretty(value).unwrap();
    fs::write(dir.join(name), text + "\n").unwrap();
    println!("wrote {name}");
}

fn pair(p: &Presentation, k: &CylFunction, l: &CylFunction) -> CocyclePairFile {
    CocyclePairFile {
        k: io::cyl_to_file(p, k),
        l: io::cyl_to_file(p, l),
    }
}

fn subst(rules: &[(&str, &str)]) -> MapSpecFile {
    MapSpecFile::Substitution {
        rules: rules
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        point_overrides: vec![],
        suffix_overrides: vec![],
    }
}

fn ov(ft: &str, fc: &str, tt: &str, tc: &str) -> OverrideFile {
    OverrideFile {
        from: PointFile {
            transient: ft.into(),
            cycle: fc.into(),
        },
        to: PointFile {
            transient: tt.into(),
            cycle: tc.into(),
        },
    }
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&dir).unwrap();

    for name in fixtures::NAMES {
        let p = fixtures::by_name(name).unwrap();
        write_json(&dir, &format!("{name}.json"), &io::presentation_to_file(&p));
    }
    write_json(
        &dir,
        "A.json",
        &io::matrix_to_file(&fixtures::matrix_a(), MatrixKind::Edge),
    );
    write_json(
        &dir,
        "Aprime.json",
        &io::matrix_to_file(&fixtures::matrix_a_prime(), MatrixKind::Edge),
    );

    // even -> odd exchange of 1 by 10, with its cocycles
    let even = fixtures::even().unwrap();
    let odd = fixtures::odd().unwrap();
    write_json(
        &dir,
        "map_even_odd.json",
        &MapsFile {
            format: io::FORMAT.into(),
            h: subst(&[("1", "10")]),
            h_inv: subst(&[("10", "1")]),
        },
    );
    write_json(
        &dir,
        "cocycles_even_odd.json",
        &CocyclesFile {
            format: io::FORMAT.into(),
            x: pair(
                &even,
                &depth1(&even, &[("0", 0), ("1", 0)]),
                &depth1(&even, &[("0", 1), ("1", 2)]),
            ),
            y: pair(
                &odd,
                &depth1(&odd, &[("0", 0), ("1", 1)]),
                &depth1(&odd, &[("0", 1), ("1", 1)]),
            ),
        },
    );

    // full shift -> golden mean, same shape of exchange and cocycles
    let full2 = fixtures::full2().unwrap();
    let golden = fixtures::golden().unwrap();
    write_json(
        &dir,
        "map_full2_golden.json",
        &MapsFile {
            format: io::FORMAT.into(),
            h: subst(&[("1", "10")]),
            h_inv: subst(&[("10", "1")]),
        },
    );
    write_json(
        &dir,
        "cocycles_full2_golden.json",
        &CocyclesFile {
            format: io::FORMAT.into(),
            x: pair(
                &full2,
                &depth1(&full2, &[("0", 0), ("1", 0)]),
                &depth1(&full2, &[("0", 1), ("1", 2)]),
            ),
            y: pair(
                &golden,
                &depth1(&golden, &[("0", 0), ("1", 1)]),
                &depth1(&golden, &[("0", 1), ("1", 1)]),
            ),
        },
    );

    // reducible vertex shifts: exchange of 21 by 2 with sink overrides
    let ep = fixtures::e_prime().unwrap();
    let fp = fixtures::f_prime().unwrap();
    let sink_overrides = vec![ov("", "34", "", "43"), ov("", "43", "", "34")];
    write_json(
        &dir,
        "map_Eprime_Fprime.json",
        &MapsFile {
            format: io::FORMAT.into(),
            h: MapSpecFile::Substitution {
                rules: vec![("21".into(), "2".into())],
                point_overrides: sink_overrides.clone(),
                suffix_overrides: vec![ov("21", "34", "21", "34")],
            },
            h_inv: MapSpecFile::Substitution {
                rules: vec![("2".into(), "21".into())],
                point_overrides: sink_overrides,
                suffix_overrides: vec![ov("21", "34", "21", "34")],
            },
        },
    );
    write_json(
        &dir,
        "cocycles_Eprime_Fprime.json",
        &CocyclesFile {
            format: io::FORMAT.into(),
            x: pair(
                &ep,
                &depth1(&ep, &[("1", 0), ("2", 1), ("3", 0), ("4", 0)]),
                &depth_n(&ep, 3, 1, &[("134", 2), ("213", 2)]),
            ),
            y: pair(
                &fp,
                &constant(&fp, 0),
                &depth_n(
                    &fp,
                    3,
                    1,
                    &[("134", 2), ("211", 2), ("212", 2), ("221", 2), ("222", 2)],
                ),
            ),
        },
    );

    // edge shifts E and F: exchange of e by e'd'
    let e = fixtures::graph_e().unwrap();
    let f = fixtures::graph_f().unwrap();
    write_json(
        &dir,
        "map_E_F.json",
        &MapsFile {
            format: io::FORMAT.into(),
            h: subst(&[
                ("e", "e'd'"),
                ("c", "c'"),
                ("b", "b'"),
                ("d", "d'"),
                ("a", "a'"),
            ]),
            h_inv: subst(&[
                ("e'd'", "e"),
                ("c'", "c"),
                ("b'", "b"),
                ("d'", "d"),
                ("a'", "a"),
            ]),
        },
    );
    write_json(
        &dir,
        "cocycles_E_F.json",
        &CocyclesFile {
            format: io::FORMAT.into(),
            x: pair(
                &e,
                &constant(&e, 0),
                &depth1(&e, &[("a", 1), ("c", 1), ("d", 1), ("b", 2), ("e", 2)]),
            ),
            y: pair(
                &f,
                &depth1(&f, &[("a'", 0), ("c'", 0), ("d'", 0), ("b'", 1), ("e'", 1)]),
                &constant(&f, 1),
            ),
        },
    );
}
