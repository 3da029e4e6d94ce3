use std::collections::HashMap;

use roxmltree::{Document, Node};

use super::PetriNet;
use crate::error::NetError;

fn fail(msg: impl Into<String>) -> NetError {
    NetError::Pnml(msg.into())
}

/// Integer held in a `<text>` child, as in `<initialMarking><text>1</text>`.
fn text_value(node: Node, what: &str) -> Result<u32, NetError> {
    let text = node
        .children()
        .find(|c| c.has_tag_name("text"))
        .and_then(|t| t.text())
        .ok_or_else(|| fail(format!("{what} without a <text> value")))?;
    let value: i64 = text
        .trim()
        .parse()
        .map_err(|_| fail(format!("{what} `{}` is not an integer", text.trim())))?;
    u32::try_from(value).map_err(|_| fail(format!("{what} {value} is out of range")))
}

fn attr<'a>(node: Node<'a, '_>, name: &str) -> Result<&'a str, NetError> {
    node.attribute(name)
        .ok_or_else(|| fail(format!("<{}> without `{name}`", node.tag_name().name())))
}

// annotations with no effect on the semantics
const IGNORED: [&str; 3] = ["name", "graphics", "toolspecific"];

fn check_children(node: Node, allowed: &[&str]) -> Result<(), NetError> {
    for c in node.children().filter(Node::is_element) {
        let tag = c.tag_name().name();
        if !IGNORED.contains(&tag) && !allowed.contains(&tag) {
            return Err(fail(format!(
                "unsupported element <{tag}> inside <{}>",
                node.tag_name().name()
            )));
        }
    }
    Ok(())
}

/// Reads a P/T net from PNML. Places are named by their `id`. Pages are
/// flattened; reference nodes, colored nets and any other extension are
/// rejected.
pub fn parse_pnml(xml: &str) -> Result<PetriNet, NetError> {
    let doc = Document::parse(xml).map_err(|e| fail(e.to_string()))?;
    let root = doc.root_element();
    if !root.has_tag_name("pnml") {
        return Err(fail("root element is not <pnml>"));
    }
    check_children(root, &["net"])?;
    let mut nets = root.children().filter(|c| c.has_tag_name("net"));
    let net = nets.next().ok_or_else(|| fail("no <net> element"))?;
    if nets.next().is_some() {
        return Err(fail("more than one <net> element"));
    }
    let kind = net.attribute("type").unwrap_or("");
    if !kind.ends_with("ptnet") {
        return Err(fail(format!("net type `{kind}` is not a P/T net")));
    }

    let mut places = Vec::new();
    let mut m0 = Vec::new();
    let mut transitions = Vec::new();
    let mut arcs = Vec::new();
    let mut pages = vec![net];
    while let Some(page) = pages.pop() {
        check_children(page, &["page", "place", "transition", "arc"])?;
        for c in page.children().filter(Node::is_element) {
            match c.tag_name().name() {
                "page" => pages.push(c),
                "place" => {
                    check_children(c, &["initialMarking"])?;
                    places.push(attr(c, "id")?.to_string());
                    let init = c.children().find(|x| x.has_tag_name("initialMarking"));
                    m0.push(match init {
                        Some(n) => text_value(n, "initial marking")?,
                        None => 0,
                    });
                }
                "transition" => {
                    check_children(c, &[])?;
                    transitions.push(attr(c, "id")?.to_string());
                }
                "arc" => {
                    check_children(c, &["inscription"])?;
                    let w = match c.children().find(|x| x.has_tag_name("inscription")) {
                        Some(n) => text_value(n, "arc inscription")?,
                        None => 1,
                    };
                    arcs.push((attr(c, "source")?, attr(c, "target")?, w));
                }
                _ => {}
            }
        }
    }

    let place_ix: HashMap<&str, usize> = places.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let trans_ix: HashMap<&str, usize> = transitions.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    if place_ix.len() != places.len() || trans_ix.len() != transitions.len() {
        return Err(fail("duplicate node id"));
    }
    let mut w_minus = vec![vec![0; places.len()]; transitions.len()];
    let mut w_plus = w_minus.clone();
    for (src, dst, w) in arcs {
        match (place_ix.get(src), trans_ix.get(dst), trans_ix.get(src), place_ix.get(dst)) {
            (Some(&p), Some(&t), _, _) => w_minus[t][p] += w,
            (_, _, Some(&t), Some(&p)) => w_plus[t][p] += w,
            _ => return Err(fail(format!("arc {src} -> {dst} does not link a place and a transition"))),
        }
    }
    Ok(PetriNet {
        places,
        transitions,
        w_minus,
        w_plus,
        m0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"<?xml version="1.0"?>
<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">
  <net id="n" type="http://www.pnml.org/version-2009/grammar/ptnet">
    <name><text>small</text></name>
    <page id="pg">
      <place id="a"><initialMarking><text>2</text></initialMarking></place>
      <place id="b"/>
      <transition id="t"><name><text>t</text></name></transition>
      <arc id="e1" source="a" target="t"><inscription><text>2</text></inscription></arc>
      <arc id="e2" source="t" target="b"/>
    </page>
  </net>
</pnml>"#;

    #[test]
    fn reads_a_small_net() {
        let net = parse_pnml(SMALL).unwrap();
        assert_eq!(net.places, vec!["a", "b"]);
        assert_eq!(net.m0, vec![2, 0]);
        assert_eq!(net.w_minus, vec![vec![2, 0]]);
        assert_eq!(net.w_plus, vec![vec![0, 1]]);
    }

    #[test]
    fn rejects_extensions() {
        let colored = SMALL.replace("grammar/ptnet", "grammar/symmetricnet");
        assert!(parse_pnml(&colored).unwrap_err().to_string().contains("not a P/T net"));
        let refp = SMALL.replace("<place id=\"b\"/>", "<place id=\"b\"/><referencePlace id=\"r\" ref=\"a\"/>");
        assert!(parse_pnml(&refp).unwrap_err().to_string().contains("referencePlace"));
        let bad = SMALL.replace("<text>2</text></inscription>", "<text>x</text></inscription>");
        assert!(parse_pnml(&bad).is_err());
    }
}
