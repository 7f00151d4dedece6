// SPDX-License-Identifier: Apache-2.0

use cremona_core::cremona::homaloidal_type;
use cremona_core::HomaloidalType;

#[test]
fn benchmarked_map_has_the_expected_type() {
    let (c, p, _) = cremona_bench::fixture();
    let f = c.translation_map(&p).unwrap();
    assert_eq!(homaloidal_type(&f).unwrap(), HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]));
}
