use alloc::format;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{param, Result};
use crate::numeric::{rat, render, Rational};
use crate::padic::Context;

use super::{BallWeight, StepFunction};

/// Campanato data `(q_i, ν_i)` attached to one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct CampanatoData {
    pub q: Rational,
    pub weight: BallWeight,
}

/// The symbols `b_1, …, b_m` of a commutator, with optional smoothness data.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorSymbols {
    ctx: Context,
    symbols: Vec<StepFunction>,
    betas: Option<Vec<Rational>>,
    campanato: Option<Vec<CampanatoData>>,
}

impl CommutatorSymbols {
    pub fn new(ctx: Context, symbols: Vec<StepFunction>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(param("symbols", "at least one symbol is required"));
        }
        for b in &symbols {
            ctx.check_same(b.context())?;
        }
        Ok(CommutatorSymbols {
            ctx,
            symbols,
            betas: None,
            campanato: None,
        })
    }

    /// Attaches Lipschitz exponents: each in `(0, 1)`, total below `n`.
    pub fn with_betas(mut self, betas: Vec<Rational>) -> Result<Self> {
        if betas.len() != self.symbols.len() {
            return Err(param(
                "betas",
                format!("{} exponents for {} symbols", betas.len(), self.symbols.len()),
            ));
        }
        for b in &betas {
            if !b.is_positive() || *b >= rat(1) {
                return Err(param("betas", format!("{} is outside (0, 1)", render(b))));
            }
        }
        let total: Rational = betas.iter().sum();
        if total >= rat(self.ctx.dim() as i64) {
            return Err(param("betas", format!("sum {} is not below n", render(&total))));
        }
        self.betas = Some(betas);
        Ok(self)
    }

    pub fn with_campanato(mut self, data: Vec<CampanatoData>) -> Result<Self> {
        if data.len() != self.symbols.len() {
            return Err(param(
                "campanato",
                format!("{} entries for {} symbols", data.len(), self.symbols.len()),
            ));
        }
        if let Some(d) = data.iter().find(|d| d.q < rat(1)) {
            return Err(param("campanato.q", format!("{} is below 1", render(&d.q))));
        }
        self.campanato = Some(data);
        Ok(self)
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn m(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[StepFunction] {
        &self.symbols
    }

    pub fn betas(&self) -> Option<&[Rational]> {
        self.betas.as_deref()
    }

    /// `β = Σ β_i`, when exponents are attached.
    pub fn beta(&self) -> Option<Rational> {
        self.betas.as_ref().map(|b| b.iter().sum())
    }

    pub fn campanato(&self) -> Option<&[CampanatoData]> {
        self.campanato.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::padic::Ball;
    use alloc::vec;

    #[test]
    fn validation() {
        let ctx = Context::new(2, 1).unwrap();
        let b = StepFunction::indicator(&Ball::unit(ctx));
        assert!(CommutatorSymbols::new(ctx, vec![]).is_err());
        let s = CommutatorSymbols::new(ctx, vec![b.clone(), b.clone()]).unwrap();
        assert_eq!(s.m(), 2);
        assert!(s.clone().with_betas(vec![ratio(1, 2)]).is_err());
        assert!(s.clone().with_betas(vec![ratio(1, 2), rat(1)]).is_err());
        // 1/2 + 3/4 exceeds n = 1
        assert!(s.clone().with_betas(vec![ratio(1, 2), ratio(3, 4)]).is_err());
        let s = s.with_betas(vec![ratio(1, 4), ratio(1, 2)]).unwrap();
        assert_eq!(s.beta(), Some(ratio(3, 4)));
        let other = Context::new(3, 1).unwrap();
        assert!(CommutatorSymbols::new(other, vec![b]).is_err());
    }
}
