//! Interval maps, horseshoes, nested interval trees and the itinerary pull-back.

mod horseshoe;
mod map;
mod pullback;
mod tree;

pub use horseshoe::{entropy_lower_bound, find_horseshoe, CoverWitness, Horseshoe, COVER_TOLERANCE};
pub use map::IntervalMap1D;
pub use pullback::{
    check_commutation, dc1_point_sample, itinerary_points, ChainLink, CodedIntervalSystem, CodedPoint, Dc1PointReport,
    IntervalEnvelope, ItineraryPoint, PullbackSettings, SemiConjugacySample,
};
pub use tree::{refine_tree, NestedIntervalTree, ENDPOINT_TOLERANCE};
