use prefadvisor::dataio::{expand_counts, parse_records, records_to_csv, tabulate, SampleCatalog};
use prefadvisor::stats::ContingencyTable;
use proptest::prelude::*;

fn table() -> impl Strategy<Value = ContingencyTable> {
    (1usize..12).prop_flat_map(|rows| {
        prop::collection::vec(prop::collection::vec(0u64..15, 8), rows).prop_map(move |counts| {
            let catalog = SampleCatalog::numbered(rows).unwrap();
            let groups = prefadvisor::dataio::CustomerGroup::all()
                .iter()
                .map(|g| g.code())
                .collect();
            ContingencyTable::new(counts, catalog.ids().to_vec(), groups).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn tabulate_inverts_expand(t in table()) {
        let catalog = SampleCatalog::numbered(t.n_rows()).unwrap();
        let records = expand_counts(&t).unwrap();
        prop_assert_eq!(records.len() as u64, t.grand_total());
        prop_assert_eq!(tabulate(&records, &catalog).unwrap(), t);
    }

    #[test]
    fn csv_round_trip(t in table()) {
        let catalog = SampleCatalog::numbered(t.n_rows()).unwrap();
        let records = expand_counts(&t).unwrap();
        prop_assume!(!records.is_empty());
        let back = parse_records(&records_to_csv(&records), &catalog).unwrap();
        prop_assert_eq!(back, records);
    }
}
