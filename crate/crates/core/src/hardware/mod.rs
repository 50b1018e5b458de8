//! Device topologies, native-gate lowering, SWAP routing, depth profiles
//! and the time and error estimators.

mod depth;
mod device;
mod estimate;
mod native;
mod routing;
mod topology;

pub use depth::{compute_depth_profile, compute_depth_profile_with, DepthProfile, DEFAULT_SWAP_TWO_QUBIT_GATES};
pub use device::{builtin_device, builtin_device_profiles, CalibrationData, DeviceProfile, IBM_BRISBANE, QUANTINUUM_H2};
pub use estimate::{
    estimate_error_probability, estimate_layer_time, estimate_resources, estimate_total_time, estimation_circuit,
    profile_on, EstimateOptions, ResourceEstimate,
};
pub use native::{is_native, to_native};
pub use routing::{default_mapping, route_circuit, verify_routing, RoutedCircuit};
pub use topology::{build_topology, Topology, TopologyKind, TopologySpec};
