//! Nets, separated partitions, gluing of local embeddings, and Lipschitz
//! extension into R-trees.

mod extend;
mod glue;
mod nets;
mod rtree;

pub use extend::{
    audit_extension, lipschitz_extend_to_tree, random_extension_instance, ExtensionAudit, ExtensionInstance, TreeExtension,
};
pub use glue::{
    audit_composite, audit_glue, composite_embedding, glue_embedding, ChartAtlas, CompositeAudit, CompositeEmbedding,
    GlueAudit, GlueEmbedding, IdentityCharts,
};
pub use nets::{
    covering_radius, greedy_net, greedy_net_strict, net_distance_family, separated_partition, separation, NetFamilyAudit,
    SeparatedPartition,
};
pub use rtree::{tree_ball_intersect, RTree, RTreePoint, TreeBall};
