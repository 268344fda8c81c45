//! The models shipped in `models/`, parsed and validated.

use crate::model::ModelDef;
use crate::parse::parse_model;

pub const UAV_SRC: &str = include_str!("../../../models/uav.epc");
pub const UAV_PROPERTIES_SRC: &str = include_str!("../../../models/uav_properties.atle");
pub const DEMO3_SRC: &str = include_str!("../../../models/demo3.epc");
pub const DEMO3_PERMISSIVE_SRC: &str = include_str!("../../../models/demo3_permissive.epc");

pub fn uav() -> ModelDef {
    parse_model(UAV_SRC).expect("uav.epc is valid")
}

pub fn demo3() -> ModelDef {
    parse_model(DEMO3_SRC).expect("demo3.epc is valid")
}

pub fn demo3_permissive() -> ModelDef {
    parse_model(DEMO3_PERMISSIVE_SRC).expect("demo3_permissive.epc is valid")
}

/// `key=value` pairs from the `# expect:` header line of a fixture.
pub fn expectations(src: &str) -> Vec<(&str, &str)> {
    src.lines()
        .filter_map(|l| l.strip_prefix("# expect:"))
        .flat_map(|rest| rest.split_whitespace())
        .filter_map(|kv| kv.split_once('='))
        .collect()
}
