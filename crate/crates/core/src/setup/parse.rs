use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Detector, Diagnostic, Event, NamedFluxon, PathDecl, Setup, Source, Spanned};
use crate::fock::{Mode, ModeKind, ModeRegistry, MAX_BOSONIC_OCCUPANCY};
use crate::geometry::{ChargeSign, Fluxon, ParticlePath, Vec2};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (byte, ch) in content.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token { text: &content[b..byte], column: c });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token { text: &content[b..], column: c });
    }
    tokens
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A reference to a mode by name, resolved after all declarations are read.
#[derive(Debug, Clone)]
struct ModeRef {
    name: String,
    line: usize,
    column: usize,
}

/// A referenced mode and the kind the event requires of it.
type KindCheck = (ModeRef, Option<ModeKind>);

#[derive(Default)]
struct Parser {
    diagnostics: Vec<Diagnostic>,
    fluxons: Vec<Spanned<NamedFluxon>>,
    modes: Vec<(Mode, usize)>,
    sources: Vec<(Spanned<Source>, ModeRef)>,
    paths: Vec<(usize, ModeRef, Vec<Vec2>)>,
    events: Vec<(Spanned<Event>, Vec<KindCheck>)>,
    detectors: Vec<(Spanned<Detector>, Vec<ModeRef>)>,
    mode_lines_seen: usize,
}

impl Parser {
    fn error(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::error(line, column, message));
    }

    fn arity(&mut self, line: usize, keyword: &Token, args: &[Token], expected: usize) -> bool {
        if args.len() != expected {
            self.error(
                line,
                keyword.column,
                format!("`{}` expected {expected} fields, found {}", keyword.text, args.len()),
            );
            return false;
        }
        true
    }

    fn ident(&mut self, line: usize, tok: &Token) -> Option<String> {
        if is_identifier(tok.text) {
            Some(tok.text.to_string())
        } else {
            self.error(line, tok.column, format!("invalid identifier '{}'", tok.text));
            None
        }
    }

    fn mode_ref(&mut self, line: usize, tok: &Token) -> Option<ModeRef> {
        self.ident(line, tok).map(|name| ModeRef { name, line, column: tok.column })
    }

    fn number(&mut self, line: usize, tok: &Token) -> Option<f64> {
        match tok.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.error(line, tok.column, format!("expected a finite number, found '{}'", tok.text));
                None
            }
        }
    }

    fn point(&mut self, line: usize, x: &Token, y: &Token) -> Option<Vec2> {
        let x = self.number(line, x);
        let y = self.number(line, y);
        Some(Vec2::new(x?, y?))
    }

    fn count(&mut self, line: usize, tok: &Token) -> Option<u8> {
        match tok.text.parse::<u8>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.error(line, tok.column, format!("expected an occupancy 0..=255, found '{}'", tok.text));
                None
            }
        }
    }

    fn literal(&mut self, line: usize, tok: &Token, expected: &str) -> bool {
        if tok.text == expected {
            true
        } else {
            self.error(line, tok.column, format!("expected '{expected}', found '{}'", tok.text));
            false
        }
    }

    fn line(&mut self, line: usize, tokens: &[Token]) {
        let Some((keyword, args)) = tokens.split_first() else {
            return;
        };
        match keyword.text {
            "fluxon" => self.fluxon(line, keyword, args),
            "mode" => {
                self.mode_lines_seen += 1;
                self.mode(line, keyword, args)
            }
            "source" => self.source(line, keyword, args),
            "path" => self.path(line, keyword, args),
            "bs" => self.beam_splitter(line, keyword, args),
            "create" => self.create(line, keyword, args),
            "annih" => self.annihilate(line, keyword, args),
            "detect" => self.detect(line, keyword, args),
            other => self.error(line, keyword.column, format!("unknown declaration '{other}'")),
        }
    }

    fn fluxon(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !self.arity(line, kw, args, 4) {
            return;
        }
        let name = self.ident(line, &args[0]);
        let pos = self.point(line, &args[1], &args[2]);
        let alpha = self.number(line, &args[3]);
        let (Some(name), Some(pos), Some(alpha)) = (name, pos, alpha) else {
            return;
        };
        if self.fluxons.iter().any(|f| f.name == name) {
            self.error(line, args[0].column, format!("duplicate fluxon '{name}'"));
            return;
        }
        if let Some(other) = self.fluxons.iter().find(|f| f.fluxon.position.distance(pos) <= 1e-12) {
            let msg = format!("fluxon '{name}' coincides with fluxon '{}'", other.name);
            self.error(line, args[1].column, msg);
            return;
        }
        self.fluxons.push(Spanned::new(NamedFluxon { name, fluxon: Fluxon::new(pos, alpha) }, line));
    }

    fn mode(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !(2..=3).contains(&args.len()) {
            self.error(line, kw.column, format!("`mode` expected 2 or 3 fields, found {}", args.len()));
            return;
        }
        let name = self.ident(line, &args[0]);
        let kind = match args[1].text.parse::<ModeKind>() {
            Ok(k) => Some(k),
            Err(_) => {
                let msg = format!("unknown mode kind '{}' (electron, hole, photon, atom)", args[1].text);
                self.error(line, args[1].column, msg);
                None
            }
        };
        let cap = match args.get(2) {
            Some(t) => self.count(line, t),
            None => Some(1),
        };
        let (Some(name), Some(kind), Some(cap)) = (name, kind, cap) else {
            return;
        };
        let ok = if kind.is_fermionic() { cap == 1 } else { (1..=MAX_BOSONIC_OCCUPANCY).contains(&cap) };
        if !ok {
            let col = args.get(2).map_or(args[1].column, |t| t.column);
            let limit = if kind.is_fermionic() { "1".to_string() } else { format!("1..={MAX_BOSONIC_OCCUPANCY}") };
            self.error(line, col, format!("{kind} mode '{name}' max_occupancy must be {limit}, got {cap}"));
            return;
        }
        if self.modes.iter().any(|(m, _)| m.name == name) {
            self.error(line, args[0].column, format!("duplicate mode '{name}'"));
            return;
        }
        self.modes.push((Mode::with_capacity(name, kind, cap), line));
    }

    fn source(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !self.arity(line, kw, args, 4) {
            return;
        }
        let mode = self.mode_ref(line, &args[0]);
        let pos = self.point(line, &args[1], &args[2]);
        let occ = self.count(line, &args[3]);
        if let (Some(mode), Some(position), Some(occupancy)) = (mode, pos, occ) {
            let src = Source { mode: mode.name.clone(), position, occupancy };
            self.sources.push((Spanned::new(src, line), mode));
        }
    }

    fn path(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if args.len() < 5 || args.len().is_multiple_of(2) {
            let msg = format!(
                "`path` expected a mode and at least two x y points (odd field count >= 5), found {} fields",
                args.len()
            );
            self.error(line, kw.column, msg);
            return;
        }
        let mode = self.mode_ref(line, &args[0]);
        let points: Vec<Option<Vec2>> = args[1..].chunks(2).map(|c| self.point(line, &c[0], &c[1])).collect();
        if let (Some(mode), Some(points)) = (mode, points.into_iter().collect::<Option<Vec<_>>>()) {
            self.paths.push((line, mode, points));
        }
    }

    fn beam_splitter(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !self.arity(line, kw, args, 2) {
            return;
        }
        let a = self.mode_ref(line, &args[0]);
        let b = self.mode_ref(line, &args[1]);
        if let (Some(a), Some(b)) = (a, b) {
            if a.name == b.name {
                self.error(line, args[1].column, format!("beam splitter needs two distinct modes, got '{}' twice", a.name));
                return;
            }
            let event = Event::BeamSplitter { a: a.name.clone(), b: b.name.clone() };
            self.events.push((Spanned::new(event, line), vec![(a, None), (b, None)]));
        }
    }

    fn create(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !self.arity(line, kw, args, 7) {
            return;
        }
        let photon = self.mode_ref(line, &args[0]);
        let arrow = self.literal(line, &args[1], "->");
        let electron = self.mode_ref(line, &args[2]);
        let hole = self.mode_ref(line, &args[3]);
        let at_sign = self.literal(line, &args[4], "@");
        let at = self.point(line, &args[5], &args[6]);
        if let (Some(p), true, Some(e), Some(h), true, Some(at)) = (photon, arrow, electron, hole, at_sign, at) {
            let event = Event::PairCreate { photon: p.name.clone(), electron: e.name.clone(), hole: h.name.clone(), at };
            let refs = vec![(p, Some(ModeKind::Photon)), (e, Some(ModeKind::Electron)), (h, Some(ModeKind::Hole))];
            self.events.push((Spanned::new(event, line), refs));
        }
    }

    fn annihilate(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if !self.arity(line, kw, args, 7) {
            return;
        }
        let electron = self.mode_ref(line, &args[0]);
        let hole = self.mode_ref(line, &args[1]);
        let arrow = self.literal(line, &args[2], "->");
        let photon = self.mode_ref(line, &args[3]);
        let at_sign = self.literal(line, &args[4], "@");
        let at = self.point(line, &args[5], &args[6]);
        if let (Some(e), Some(h), true, Some(p), true, Some(at)) = (electron, hole, arrow, photon, at_sign, at) {
            let event = Event::PairAnnihilate { electron: e.name.clone(), hole: h.name.clone(), photon: p.name.clone(), at };
            let refs = vec![(e, Some(ModeKind::Electron)), (h, Some(ModeKind::Hole)), (p, Some(ModeKind::Photon))];
            self.events.push((Spanned::new(event, line), refs));
        }
    }

    fn detect(&mut self, line: usize, kw: &Token, args: &[Token]) {
        if args.len() < 2 {
            let msg = format!("`detect` expected 'keep' and at least one mode=occ, found {} fields", args.len());
            self.error(line, kw.column, msg);
            return;
        }
        if !self.literal(line, &args[0], "keep") {
            return;
        }
        let mut keep = Vec::new();
        let mut refs = Vec::new();
        let mut ok = true;
        for tok in &args[1..] {
            let Some((name, occ)) = tok.text.split_once('=') else {
                self.error(line, tok.column, format!("expected mode=occ, found '{}'", tok.text));
                ok = false;
                continue;
            };
            let name_tok = Token { text: name, column: tok.column };
            let occ_tok = Token { text: occ, column: tok.column + name.chars().count() + 1 };
            let mode = self.mode_ref(line, &name_tok);
            let occ = self.count(line, &occ_tok);
            match (mode, occ) {
                (Some(m), Some(o)) => {
                    if keep.iter().any(|(n, _): &(String, u8)| *n == m.name) {
                        self.error(line, tok.column, format!("mode '{}' listed twice", m.name));
                        ok = false;
                        continue;
                    }
                    keep.push((m.name.clone(), o));
                    refs.push(m);
                }
                _ => ok = false,
            }
        }
        if ok {
            self.detectors.push((Spanned::new(Detector { keep }, line), refs));
        }
    }

    fn finish(mut self) -> (Option<Setup>, Vec<Diagnostic>) {
        if self.mode_lines_seen == 0 {
            self.error(1, 1, "no modes declared");
        }
        let kinds: HashMap<String, (ModeKind, u8)> =
            self.modes.iter().map(|(m, _)| (m.name.clone(), (m.kind, m.max_occupancy))).collect();
        let lookup = |p: &mut Parser, r: &ModeRef| -> Option<(ModeKind, u8)> {
            let found = kinds.get(&r.name).copied();
            if found.is_none() {
                p.error(r.line, r.column, format!("unknown mode '{}'", r.name));
            }
            found
        };

        let sources = std::mem::take(&mut self.sources);
        for (src, r) in &sources {
            if let Some((_, cap)) = lookup(&mut self, r) {
                if src.occupancy > cap {
                    let msg = format!("source occupancy {} exceeds max_occupancy {cap} of '{}'", src.occupancy, r.name);
                    self.error(r.line, r.column, msg);
                }
            }
        }

        let mut paths = Vec::new();
        let mut seen = HashSet::new();
        for (line, r, points) in std::mem::take(&mut self.paths) {
            let Some((kind, _)) = lookup(&mut self, &r) else { continue };
            let Some(charge) = ChargeSign::for_kind(kind) else {
                self.error(line, r.column, format!("path declared for uncharged {kind} mode '{}'", r.name));
                continue;
            };
            if !seen.insert(r.name.clone()) {
                self.error(line, r.column, format!("second path for mode '{}'", r.name));
                continue;
            }
            match ParticlePath::new(charge, points) {
                Ok(path) => paths.push(Spanned::new(PathDecl { mode: r.name, path }, line)),
                Err(e) => self.error(line, r.column, format!("invalid path for '{}': {e}", r.name)),
            }
        }

        let events = std::mem::take(&mut self.events);
        for (event, refs) in &events {
            let resolved: Vec<Option<ModeKind>> = refs.iter().map(|(r, _)| lookup(&mut self, r).map(|k| k.0)).collect();
            for ((r, want), got) in refs.iter().zip(&resolved) {
                if let (Some(want), Some(got)) = (want, got) {
                    if want != got {
                        self.error(r.line, r.column, format!("expected {want} mode, '{}' is {got}", r.name));
                    }
                }
            }
            if let (Event::BeamSplitter { .. }, [Some(ka), Some(kb)]) = (&event.value, resolved.as_slice()) {
                if ka != kb {
                    let msg = format!("beam splitter mixes {ka} mode '{}' with {kb} mode '{}'", refs[0].0.name, refs[1].0.name);
                    self.error(event.line, refs[0].0.column, msg);
                }
            }
        }

        let detectors = std::mem::take(&mut self.detectors);
        for (det, refs) in &detectors {
            for (r, (_, occ)) in refs.iter().zip(&det.keep) {
                if let Some((_, cap)) = lookup(&mut self, r) {
                    if *occ > cap {
                        let msg = format!("detector occupancy {occ} exceeds max_occupancy {cap} of '{}'", r.name);
                        self.error(r.line, r.column, msg);
                    }
                }
            }
        }

        let mut diagnostics = self.diagnostics;
        diagnostics.sort_by_key(|d| (d.line, d.column));
        if super::has_errors(&diagnostics) {
            return (None, diagnostics);
        }
        let mode_lines = self.modes.iter().map(|(_, l)| *l).collect();
        let registry = match ModeRegistry::new(self.modes.into_iter().map(|(m, _)| m).collect()) {
            Ok(r) => Arc::new(r),
            Err(e) => {
                diagnostics.push(Diagnostic::error(1, 1, e.to_string()));
                return (None, diagnostics);
            }
        };
        let setup = Setup {
            fluxons: self.fluxons,
            registry,
            mode_lines,
            sources: sources.into_iter().map(|(s, _)| s).collect(),
            paths,
            events: events.into_iter().map(|(e, _)| e).collect(),
            detectors: detectors.into_iter().map(|(d, _)| d).collect(),
        };
        (Some(setup), diagnostics)
    }
}

/// Parses layout text. A `Setup` is returned only when no error was found;
/// every problem is reported as a diagnostic.
pub fn parse(text: &str) -> (Option<Setup>, Vec<Diagnostic>) {
    let mut parser = Parser::default();
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line);
        parser.line(i + 1, &tokens);
    }
    parser.finish()
}

/// `parse` for raw bytes; invalid UTF-8 is a diagnostic.
pub fn parse_bytes(bytes: &[u8]) -> (Option<Setup>, Vec<Diagnostic>) {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let column = valid.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
            (None, vec![Diagnostic::error(line, column, "input is not valid UTF-8")])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<Diagnostic> {
        let (setup, diags) = parse(text);
        assert!(setup.is_none());
        diags
    }

    #[test]
    fn tokens_and_columns() {
        let t = tokenize("  bs  a b # tail");
        let cols: Vec<_> = t.iter().map(|t| (t.text, t.column)).collect();
        assert_eq!(cols, vec![("bs", 3), ("a", 7), ("b", 9)]);
    }

    #[test]
    fn missing_alpha() {
        let d = errors("mode g photon\nfluxon F 0 0\n");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].line, 2);
        assert!(d[0].message.contains("expected 4 fields"), "{}", d[0].message);
    }

    #[test]
    fn empty_input() {
        let d = errors("");
        assert!(d[0].message.contains("no modes declared"));
        let d = errors("# only a comment\n\n");
        assert!(d[0].message.contains("no modes declared"));
    }

    #[test]
    fn recovery_reports_every_line() {
        let d = errors("mode e electron\nbogus 1\nsource e x 0 1\nbs e\n");
        let lines: Vec<_> = d.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
    }

    #[test]
    fn unknown_and_mismatched_modes() {
        let d = errors("mode e electron\nmode g photon\nannih e g -> g @ 0 0\nbs e q\n");
        assert!(d.iter().any(|d| d.line == 3 && d.message.contains("expected hole mode")));
        assert!(d.iter().any(|d| d.line == 4 && d.column == 6 && d.message.contains("unknown mode 'q'")));
    }

    #[test]
    fn capacity_rules() {
        let d = errors("mode e electron 2\n");
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("max_occupancy"));
        let (s, d) = parse("mode g photon 3\nsource g 0 0 3\n");
        assert!(d.is_empty());
        assert_eq!(s.unwrap().registry.mode(0).max_occupancy, 3);
        let d = errors("mode g photon\nsource g 0 0 2\n");
        assert!(d[0].message.contains("exceeds"));
    }

    #[test]
    fn path_rules() {
        let d = errors("mode g photon\npath g 0 0 1 1\n");
        assert!(d[0].message.contains("uncharged"));
        let d = errors("mode e electron\npath e 0 0 1\n");
        assert!(d[0].message.contains("odd field count"));
        let d = errors("mode e electron\npath e 0 0 0 0\n");
        assert!(d[0].message.contains("invalid path"));
        let d = errors("mode e electron\npath e 0 0 nan 1\n");
        assert!(d[0].message.contains("finite number"));
    }

    #[test]
    fn detect_syntax() {
        let (s, d) = parse("mode g photon\nmode h photon\ndetect keep g=1 h=0\ndetect keep h=1\n");
        assert!(d.is_empty(), "{d:?}");
        let s = s.unwrap();
        assert_eq!(s.detectors.len(), 2);
        assert_eq!(s.detectors[0].keep, vec![("g".to_string(), 1), ("h".to_string(), 0)]);
        let d = errors("mode g photon\ndetect hold g=1\n");
        assert!(d[0].message.contains("'keep'"));
        let d = errors("mode g photon\ndetect keep g\n");
        assert!(d[0].message.contains("mode=occ"));
    }

    #[test]
    fn invalid_utf8() {
        let (s, d) = parse_bytes(b"mode g photon\n\xff\n");
        assert!(s.is_none());
        assert_eq!((d[0].line, d[0].column), (2, 1));
    }
}
