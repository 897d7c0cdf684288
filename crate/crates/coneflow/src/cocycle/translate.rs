use alloc::vec::Vec;

use crate::fine_graph::{Ball, Vertex};
use crate::group_models::{GroupElement, GroupModel, PeripheralStructure};

/// Left multiplication by group elements on the named vertices of a ball
/// built from a group model.
#[derive(Clone, Copy)]
pub struct Translator<'a> {
    pub model: &'a GroupModel,
    pub periph: &'a PeripheralStructure,
    pub ball: &'a Ball,
}

impl<'a> Translator<'a> {
    pub fn new(model: &'a GroupModel, periph: &'a PeripheralStructure, ball: &'a Ball) -> Self {
        Translator { model, periph, ball }
    }

    pub fn id_of(&self, g: &GroupElement) -> Option<u32> {
        self.ball.id_of(&Vertex::Group(g.clone()))
    }

    pub fn identity(&self) -> Option<u32> {
        self.id_of(&self.model.identity())
    }

    /// The group element named by a ball vertex, if it is one.
    pub fn element(&self, v: u32) -> Option<GroupElement> {
        match self.ball.vertex(v) {
            Vertex::Group(g) => Some(g),
            _ => None,
        }
    }

    /// `g·v` as a vertex of the infinite graph.
    pub fn translate_vertex(&self, g: &GroupElement, v: &Vertex) -> Option<Vertex> {
        match v {
            Vertex::Group(h) => Some(Vertex::Group(self.model.multiply(g, h))),
            Vertex::Cone(key) => {
                let rep = self.model.multiply(g, &self.periph.canonical_rep(key));
                Some(Vertex::Cone(self.periph.coset_key(self.model, key.index as usize, &rep)))
            }
            Vertex::Id(_) => None,
        }
    }

    /// `g·v` as a ball vertex, `None` when it leaves the ball.
    pub fn translate(&self, g: &GroupElement, v: u32) -> Option<u32> {
        let image = self.translate_vertex(g, &self.ball.vertex(v))?;
        self.ball.id_of(&image)
    }

    /// Images of all ball vertices, `None` where the image leaves the ball.
    pub fn table(&self, g: &GroupElement) -> Vec<Option<u32>> {
        (0..self.ball.len() as u32).map(|v| self.translate(g, v)).collect()
    }
}
