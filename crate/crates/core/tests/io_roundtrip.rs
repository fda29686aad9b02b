use proptest::prelude::*;
use szpiro_core::arith::rat_frac;
use szpiro_core::elliptic::{Point, WeierstrassModel};
use szpiro_core::io::{parse_curves, serialize_curves, CurveRecord};

fn record() -> impl Strategy<Value = Option<CurveRecord>> {
    (proptest::collection::vec((-50i64..50, 1i64..5), 5), "[a-z0-9.]{1,8}", 1i64..20, proptest::bool::ANY).prop_map(
        |(coeffs, label, mult, with_gen)| {
            if with_gen {
                // Rational points come from multiples on a known curve.
                let e = WeierstrassModel::from_ints([0, 0, 1, -1, 0]).unwrap();
                let p = e.multiply(&Point::from_ints(0, 0), mult);
                return Some(CurveRecord { label, model: e, generator: Some(p) });
            }
            let c: Vec<_> = coeffs.iter().map(|&(n, d)| rat_frac(n, d)).collect();
            let model = WeierstrassModel::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()).ok()?;
            Some(CurveRecord { label, model, generator: None })
        },
    )
}

proptest! {
    #[test]
    fn ingest_serialize_ingest(recs in proptest::collection::vec(record(), 0..8)) {
        let recs: Vec<CurveRecord> = recs.into_iter().flatten().collect();
        let text = serialize_curves(&recs);
        let back = parse_curves(&text).unwrap();
        prop_assert_eq!(&back, &recs);
        prop_assert_eq!(serialize_curves(&back), text.clone());
        let crlf = text.replace('\n', "\r\n");
        prop_assert_eq!(parse_curves(&crlf).unwrap(), recs);
    }
}
