//! Automorphism specs: `inv`, `id`, `conj:<hex or matrix>`, `images:<file>`.

use std::sync::Arc;

use selfsim_core::group::{hom_from_images, Automorphism, FiniteGroup};
use selfsim_core::matrix::{conjugation_automorphism, Matrix2, Ring};
use selfsim_core::presentation::{parse_word, Presentation};

use crate::CliError;

/// Context for reading elements: matrix ring or presentation, if any.
#[derive(Clone, Copy, Default)]
pub struct AutContext<'a> {
    pub ring: Option<Ring>,
    pub presentation: Option<&'a Presentation>,
}

/// `word:<w>` evaluates a word in the presentation's generators; anything
/// else is a hex encoding.
fn element(g: &FiniteGroup, ctx: AutContext, text: &str) -> Result<usize, CliError> {
    if let Some(w) = text.trim().strip_prefix("word:") {
        let pres = ctx
            .presentation
            .ok_or_else(|| CliError::Usage("word: elements need a presentation family".into()))?;
        let word = parse_word(w, pres.generators())?;
        return Ok(word.syllables().iter().fold(g.identity(), |acc, &(s, e)| {
            g.mul(acc, g.pow(g.generators()[s], e))
        }));
    }
    encoded(g, text)
}

fn encoded(g: &FiniteGroup, hex_text: &str) -> Result<usize, CliError> {
    let bytes = hex::decode(hex_text.trim())
        .map_err(|e| CliError::Usage(format!("bad element encoding {hex_text:?}: {e}")))?;
    g.index_of(&bytes)
        .ok_or_else(|| CliError::Usage(format!("{hex_text} is not an element of the group")))
}

/// `conj:` takes an element (inner automorphism `x ↦ c⁻¹xc`) or, for
/// matrix families, a matrix `[[a,b],[c,d]]` conjugating as `MxM⁻¹`.
/// `images:` names a file with one generator image per line.
pub fn parse_aut(
    g: &Arc<FiniteGroup>,
    ctx: AutContext,
    text: &str,
) -> Result<Automorphism, CliError> {
    let text = text.trim();
    if text == "inv" {
        return Ok(Automorphism::inversion(g)?);
    }
    if text == "id" {
        return Ok(Automorphism::identity(g));
    }
    if let Some(arg) = text.strip_prefix("conj:") {
        if arg.trim_start().starts_with('[') {
            let ring = ctx.ring.ok_or_else(|| {
                CliError::Usage("matrix conjugators need a sl2zp or sl2lambda family".into())
            })?;
            let m = Matrix2::parse(ring, arg)?;
            return Ok(conjugation_automorphism(g, &m)?);
        }
        return Ok(Automorphism::inner(g, element(g, ctx, arg)?));
    }
    if let Some(path) = text.strip_prefix("images:") {
        let body = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        let images = body
            .lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty())
            .map(|l| element(g, ctx, l))
            .collect::<Result<Vec<_>, _>>()?;
        if images.len() != g.generators().len() {
            return Err(CliError::Usage(format!(
                "{path}: {} images for {} generators",
                images.len(),
                g.generators().len()
            )));
        }
        return Ok(Automorphism::new(hom_from_images(g, g, &images)?)?);
    }
    Err(CliError::Usage(format!(
        "automorphism spec {text:?}: expected inv, id, conj:<x> or images:<file>"
    )))
}
