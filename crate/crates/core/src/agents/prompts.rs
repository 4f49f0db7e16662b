//! Prompt templates. Every agent is asked for a single JSON object so its
//! answer can be parsed without repair.

use crate::pool::CanonicalRelation;

pub const EXTRACTOR_SYSTEM: &str = "\
You turn a short scene description into a structured scene graph for a 3D layout engine.

Assets: list every physical object in the scene in the order it is mentioned. Give each a short \
name and a standalone description detailed enough to generate the object on its own, including \
color, material and pose, but no other objects. The second asset is the core asset; every other \
asset is placed relative to it.

Sizes: classify each asset as \"small\", \"medium\" or \"large\" by its real-world size relative \
to the other assets.

Relations: for every asset except the core, give its spatial relation to the core asset as a \
short phrase (for example \"on\", \"left\", \"leaning against\"). The core asset's relation is \
\"none\". A rotation may carry an angle in degrees.

Special: if the description asks for the whole scene to be repeated, answer \
\"duplicate_x_alignment\", \"duplicate_y_alignment\" or \"duplicate_facing\"; otherwise \"none\".

Answer with exactly one JSON object and nothing else, for example:
{\"description\": \"a bird on a chair\",
 \"assets\": [{\"id\": 1, \"name\": \"bird\", \"enriched_desc\": \"a small blue bird with folded wings\", \"size\": \"small\"},
            {\"id\": 2, \"name\": \"chair\", \"enriched_desc\": \"a plain wooden dining chair\", \"size\": \"medium\"}],
 \"relations\": [{\"subject\": 1, \"relation\": \"on\", \"target\": 2}, {\"subject\": 2, \"relation\": \"none\", \"target\": 2}],
 \"special\": \"none\"}";

pub fn extractor_user(description: &str) -> String {
    format!("Scene description: {description}")
}

pub fn classifier_system() -> String {
    format!(
        "You map a free-form spatial relation phrase between two objects to one entry of a fixed \
relation database: {}. \"front\" is the side facing the viewer, \"behind\" the far side. Use \
\"rotation\" only for a turn in place and give its angle in degrees.\n\
Answer with exactly one JSON object and nothing else, for example {{\"relation\": \"leaning-on\"}} \
or {{\"relation\": \"rotation\", \"angle_deg\": 90}}.",
        CanonicalRelation::TOKENS.join(", ")
    )
}

pub fn classifier_user(phrase: &str) -> String {
    format!("Relation phrase: {phrase}")
}

pub const GROUND_SYSTEM: &str = "\
You pick the ground surface for a 3D scene: \"grass\" for outdoor vegetation, \"wood\" for indoor \
floors and \"sand\" for beaches and deserts.
Answer with exactly one JSON object and nothing else, for example {\"ground\": \"grass\"}.";

pub const SUPERVISOR_SYSTEM: &str = "\
You check a 3D scene layout for physical plausibility. Assume every object should be correctly \
placed, then look for the ones that are not: objects that sink into each other or into the \
ground, objects that float without support, and objects that do not satisfy their stated \
relation to the core asset.

You get three orthographic images taken from cameras on the +x, +y and +z axes looking at the \
origin (z is up), the scene description, the scene graph and the current transform and bounding \
box of every asset. Boxes are drawn in flat colors labelled with asset ids.

Label every asset id \"positive\" when it is placed well and \"negative\" otherwise. For negative \
assets you may give a move: a world-space displacement [dx, dy, dz] and an optional yaw change \
in degrees. Never give a move for a positive asset. Moves longer than the allowed maximum are \
shortened.

Answer with exactly one JSON object and nothing else, for example:
{\"labels\": {\"1\": \"negative\", \"2\": \"positive\"},
 \"moves\": {\"1\": {\"displacement\": [0, 0, -0.3]}},
 \"rationale\": \"the bird floats above the seat\"}";
