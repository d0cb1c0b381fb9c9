//! A finite, ordered class of candidate models with a prior.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::game::model::{FomgModel, ModelJson, PomgModel};
use crate::prob::validate_distribution_std;

/// Finite ordered list of candidate models with a prior weight per model.
///
/// All members must share the same dimensions. When the class is built
/// synthetically around a known true model, `true_index` records where it
/// sits, which makes realizability hold by construction.
#[derive(Debug, Clone)]
pub struct ModelClass<M> {
    pub models: Vec<M>,
    pub prior: Vec<f64>,
    pub true_index: Option<usize>,
}

impl<M> ModelClass<M> {
    pub fn uniform(models: Vec<M>, true_index: Option<usize>) -> Result<Self> {
        if models.is_empty() {
            return Err(CoreError::InvalidInput("model class is empty".into()));
        }
        let n = models.len();
        let c = Self {
            models,
            prior: vec![1.0 / n as f64; n],
            true_index,
        };
        c.validate_prior()?;
        Ok(c)
    }

    pub fn with_prior(models: Vec<M>, prior: Vec<f64>, true_index: Option<usize>) -> Result<Self> {
        if models.len() != prior.len() {
            return Err(CoreError::DimensionMismatch(
                "prior length differs from model count".into(),
            ));
        }
        let c = Self {
            models,
            prior,
            true_index,
        };
        c.validate_prior()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    fn validate_prior(&self) -> Result<()> {
        validate_distribution_std(&self.prior, "model-class prior")?;
        if let Some(i) = self.true_index {
            if i >= self.models.len() {
                return Err(CoreError::InvalidInput(format!(
                    "true_index {i} out of range for class of {}",
                    self.models.len()
                )));
            }
        }
        Ok(())
    }
}

impl ModelClass<FomgModel> {
    /// Checks members are valid and share dimensions.
    pub fn validate(&self) -> Result<()> {
        self.validate_prior()?;
        let first = &self.models[0];
        for (i, m) in self.models.iter().enumerate() {
            m.validate()?;
            if (m.horizon, m.num_states, m.num_actions_max, m.num_actions_min)
                != (
                    first.horizon,
                    first.num_states,
                    first.num_actions_max,
                    first.num_actions_min,
                )
            {
                return Err(CoreError::InvalidModel(format!(
                    "model {i} has different dimensions from model 0"
                )));
            }
        }
        Ok(())
    }
}

impl ModelClass<PomgModel> {
    pub fn validate(&self) -> Result<()> {
        self.validate_prior()?;
        let first = &self.models[0];
        for (i, m) in self.models.iter().enumerate() {
            m.validate()?;
            if (
                m.horizon,
                m.num_states,
                m.num_obs,
                m.num_actions_max,
                m.num_actions_min,
            ) != (
                first.horizon,
                first.num_states,
                first.num_obs,
                first.num_actions_max,
                first.num_actions_min,
            ) {
                return Err(CoreError::InvalidModel(format!(
                    "model {i} has different dimensions from model 0"
                )));
            }
        }
        Ok(())
    }
}

/// JSON form of a model class: homogeneous `models` plus `prior` and the
/// optional `true_index`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelClassJson {
    pub kind: String,
    pub models: Vec<ModelJson>,
    pub prior: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_index: Option<usize>,
}

impl ModelClassJson {
    pub fn from_fomg(class: &ModelClass<FomgModel>) -> Self {
        Self {
            kind: "fomg".into(),
            models: class.models.iter().map(ModelJson::from).collect(),
            prior: class.prior.clone(),
            true_index: class.true_index,
        }
    }

    pub fn from_pomg(class: &ModelClass<PomgModel>) -> Self {
        Self {
            kind: "pomg".into(),
            models: class.models.iter().map(ModelJson::from).collect(),
            prior: class.prior.clone(),
            true_index: class.true_index,
        }
    }

    pub fn into_fomg(self) -> Result<ModelClass<FomgModel>> {
        let models = self
            .models
            .into_iter()
            .map(ModelJson::into_fomg)
            .collect::<Result<Vec<_>>>()?;
        let class = ModelClass::with_prior(models, self.prior, self.true_index)?;
        class.validate()?;
        Ok(class)
    }

    pub fn into_pomg(self) -> Result<ModelClass<PomgModel>> {
        let models = self
            .models
            .into_iter()
            .map(ModelJson::into_pomg)
            .collect::<Result<Vec<_>>>()?;
        let class = ModelClass::with_prior(models, self.prior, self.true_index)?;
        class.validate()?;
        Ok(class)
    }
}
