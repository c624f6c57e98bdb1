//! Pinned synthetic datasets and independently computed reference values.
#![allow(dead_code, clippy::excessive_precision)]

pub mod validation;

use probit_bf::linalg::Matrix;
use probit_bf::toy::ConjugateLinearModel;
use probit_bf::{
    asymptotic_gaussian, fit_mle, Data, Gaussian, Probit, QuadratureCenter, QuadratureSpec,
};

pub struct Synthetic {
    pub name: &'static str,
    pub a: &'static [f64],
    pub b: &'static [f64],
    pub y: &'static [u8],
    /// Reference log-evidence of `[a]` and `[a, b]`.
    pub log_m0: f64,
    pub log_m1: f64,
    pub mean0: f64,
    pub mean1: [f64; 2],
    pub mle0: f64,
    pub mle1: [f64; 2],
}

pub const S6: Synthetic = Synthetic {
    name: "s6",
    a: &[-0.4, 1.4, 0.4, -0.9, -1.0, -0.1],
    b: &[1.2, 0.3, -0.5, -0.9, 0.9, 0.1],
    y: &[0, 0, 0, 0, 1, 0],
    log_m0: -4.696833223107,
    log_m1: -5.429907301068,
    mean0: -0.4010754163395318,
    mean1: [-0.38669934505582354, 0.18501380162017403],
    mle0: -0.4581745556240604,
    mle1: [-0.44456790736874774, 0.2190051790070167],
};

pub const S20A: Synthetic = Synthetic {
    name: "s20a",
    a: &[
        0.7, 0.7, 0.7, 0.8, -0.4, 0.9, -0.1, 0.1, 0.3, 0.3, -0.2, -0.9, -0.9, -0.9, 0.2, -1.2,
        -0.4, 1.1, -1.3, 0.5,
    ],
    b: &[
        1.2, -0.1, 1.2, 2.4, -0.1, 0.7, -0.4, -0.1, -1.7, -1.3, 0.2, -0.5, 0.8, 1.3, 1.6, 0.6,
        -0.9, 0.1, 0.6, -1.5,
    ],
    y: &[1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0],
    log_m0: -14.384415732096,
    log_m1: -15.701127674405,
    mean0: 0.48728598876321266,
    mean1: [0.48399944889097307, -0.029099490678418497],
    mle0: 0.5057755762601821,
    mle1: [0.5076938229841346, -0.026998328136569105],
};

pub const S20B: Synthetic = Synthetic {
    name: "s20b",
    a: &[
        0.8, 1.1, -0.5, -0.6, 2.0, 0.2, -0.8, -1.4, 0.3, -0.3, 0.6, -1.4, 0.2, -0.6, 0.2, -1.3,
        -0.6, -1.3, -0.5, -0.2,
    ],
    b: &[
        1.2, 0.6, -1.1, -1.1, 0.3, 0.7, 0.4, -0.9, -2.5, 0.7, 0.4, -0.1, -1.3, -0.3, -0.2, 1.1,
        -1.0, -0.3, 1.2, -1.1,
    ],
    y: &[0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1],
    log_m0: -14.189590563831,
    log_m1: -14.626107093916,
    mean0: 0.4449315685085873,
    mean1: [0.38048024539267455, 0.388104426110798],
    mle0: 0.462527709481438,
    mle1: [0.4006387745865001, 0.39404160387092],
};

pub const ALL: [&Synthetic; 3] = [&S6, &S20A, &S20B];

impl Synthetic {
    pub fn data(&self) -> Data {
        Data::new(
            self.y.to_vec(),
            vec![("a".into(), self.a.to_vec()), ("b".into(), self.b.to_vec())],
        )
        .unwrap()
    }

    pub fn models(&self) -> (Probit, Probit) {
        let d = self.data();
        (
            Probit::new(&d, &["a"]).unwrap(),
            Probit::new(&d, &["a", "b"]).unwrap(),
        )
    }

    pub fn log_b01(&self) -> f64 {
        self.log_m0 - self.log_m1
    }
}

/// Asymptotic Gaussian from the MLE fit.
pub fn ml_gaussian(model: &Probit) -> Gaussian {
    asymptotic_gaussian(&fit_mle(model).unwrap()).unwrap()
}

pub fn mle_spec(model: &Probit) -> QuadratureSpec<f64> {
    QuadratureSpec::new(QuadratureCenter::Gaussian(ml_gaussian(model)))
}

/// `log Φ(x)` from 25-digit arithmetic.
pub const LOGCDF_TAIL: &[(f64, f64)] = &[
    (-5.0, -15.06499839398872573608),
    (-5.5, -17.77937635262526051059),
    (-6.0, -20.73676894997470565497),
    (-7.0, -27.38430749881107524263),
    (-8.0, -35.0134371599145498955),
    (-9.5, -48.30601929896523028196),
    (-10.0, -53.23128515051247057835),
    (-12.0, -75.41067300156879593884),
    (-15.0, -116.1313848457116952359),
    (-17.5, -156.9093784843464177751),
    (-20.0, -203.9171553710972639368),
    (-25.0, -316.6394080080202589352),
    (-30.0, -454.3212439563431971074),
    (-35.0, -616.9751012619225134732),
    (-37.5, -707.6689893175071910661),
    (-40.0, -804.6084420137537881666),
];

/// Mean of N(-8, 1) restricted to (0, ∞).
pub const TRUNCATED_MEAN_MU_MINUS_8: f64 = 0.12136811223611268065;

/// Conjugate linear-Gaussian pair; model 0 drops the last coefficient.
pub fn toy_pair() -> (ConjugateLinearModel<f64>, ConjugateLinearModel<f64>) {
    let a = Matrix::from_rows(&[
        vec![1.0, 0.4],
        vec![-0.5, 1.2],
        vec![0.8, -0.3],
        vec![0.2, 0.9],
        vec![-1.1, -0.6],
        vec![0.6, 0.1],
    ])
    .unwrap();
    let prior = Gaussian::new(
        vec![0.0, 0.0],
        &Matrix::from_rows(&[vec![1.5, 0.2], vec![0.2, 0.8]]).unwrap(),
    )
    .unwrap();
    let m1 = ConjugateLinearModel::new(a, vec![0.9, 0.3, 0.5, 1.1, -1.4, 0.2], 0.8, prior.clone())
        .unwrap();
    let m0 = m1.drop_last(prior.marginal(&[0]).unwrap()).unwrap();
    (m0, m1)
}
