use serde::{Deserialize, Serialize};

use crate::qcore::json::{matrix_from_json, matrix_to_json, JsonMatrix, OperatorJson};
use crate::qcore::{CompositeSpace, State};

use super::{Channel, ChannelError, Implementation};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub kraus: Vec<JsonMatrix>,
}

impl From<&Channel> for ChannelJson {
    fn from(ch: &Channel) -> Self {
        ChannelJson {
            in_dims: ch.in_space().factor_dims.clone(),
            out_dims: ch.out_space().factor_dims.clone(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<ChannelJson> for Channel {
    type Error = ChannelError;

    fn try_from(j: ChannelJson) -> Result<Self, ChannelError> {
        let kraus = j.kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>, _>>()?;
        Channel::new(CompositeSpace::new(j.in_dims)?, CompositeSpace::new(j.out_dims)?, kraus)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImplementationJson {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub unitary: JsonMatrix,
    pub ancilla: OperatorJson,
    /// Output factors forming the channel output; the others are discarded.
    pub out_partition: Vec<usize>,
}

impl From<&Implementation> for ImplementationJson {
    fn from(imp: &Implementation) -> Self {
        ImplementationJson {
            in_dims: imp.input().factor_dims.clone(),
            out_dims: imp.out_space().factor_dims.clone(),
            unitary: matrix_to_json(imp.unitary()),
            ancilla: OperatorJson {
                dims: imp.ancilla().space().factor_dims.clone(),
                matrix: matrix_to_json(imp.ancilla().matrix()),
            },
            out_partition: imp.keep().to_vec(),
        }
    }
}

impl TryFrom<ImplementationJson> for Implementation {
    type Error = ChannelError;

    fn try_from(j: ImplementationJson) -> Result<Self, ChannelError> {
        let ancilla = State::new(CompositeSpace::new(j.ancilla.dims)?, matrix_from_json(&j.ancilla.matrix)?)?;
        Implementation::new(
            CompositeSpace::new(j.in_dims)?,
            ancilla,
            matrix_from_json(&j.unitary)?,
            CompositeSpace::new(j.out_dims)?,
            j.out_partition,
        )
    }
}

impl Serialize for Channel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChannelJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Channel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Channel::try_from(ChannelJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Implementation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ImplementationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Implementation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Implementation::try_from(ImplementationJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::stinespring;
    use crate::qcore::json::{from_str, to_string};
    use crate::qcore::linalg::{max_abs, re, CMat};

    #[test]
    fn channel_and_implementation_round_trip() {
        let k0 = CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(0.6)]);
        let k1 = CMat::from_row_slice(2, 2, &[re(0.0), re(0.8), re(0.0), re(0.0)]);
        let ch = Channel::new(CompositeSpace::single(2), CompositeSpace::single(2), vec![k0, k1]).unwrap();
        let back: Channel = from_str(&to_string(&ch)).unwrap();
        assert!(max_abs(&(back.to_choi() - ch.to_choi())) == 0.0);
        let imp = stinespring(&ch).unwrap();
        let text = to_string(&imp);
        assert!(text.contains("out_partition"));
        let imp_back: Implementation = from_str(&text).unwrap();
        assert!(max_abs(&(imp_back.channel().to_choi() - ch.to_choi())) < 1e-12);
    }
}
