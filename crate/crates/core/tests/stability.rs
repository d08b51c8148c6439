use higher_dirac::report::{module_report, ses_report};

#[test]
fn reports_do_not_depend_on_depth() {
    for name in ["P", "verma:0", "verma:-2", "verma:3", "verma:-5", "trivial", "finite:4", "sum:(verma:0,trivial)"] {
        let base = module_report(name, 8, None).unwrap();
        for depth in [9, 12, 15] {
            assert_eq!(module_report(name, depth, None).unwrap(), base, "{name} at depth {depth}");
        }
    }
    for name in ["P", "infchar"] {
        let base = ses_report(name, 8, None).unwrap();
        assert_eq!(ses_report(name, 12, None).unwrap(), base, "sequence {name}");
    }
}

#[test]
fn big_n_is_respected_at_every_depth() {
    for n in [4, 5, 6, 7] {
        let a = module_report("P", 8, Some(n)).unwrap();
        let b = module_report("P", 12, Some(n)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_differential.dims.len(), n - 1);
    }
}
