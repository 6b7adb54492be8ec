use std::time::Duration;

use jotto::{
    guesser_gbr, solve, twl06, update_state, Dictionary, GameState, HiderStrategy, MemorySink, SolveConfig,
    TieBreak,
};
use jotto_service::{GameContext, Role, ServiceError, SessionManager, Status};

fn chain() -> Dictionary {
    Dictionary::from_words(["AB", "BC", "CD"], 2).unwrap()
}

fn uniform_manager(dict: Dictionary, seed: u64) -> SessionManager {
    let d = dict.len();
    let ctx = GameContext::new(dict, vec![HiderStrategy::uniform(d)], 0, 0.0, TieBreak::default(), seed, "test")
        .unwrap();
    SessionManager::new(ctx, seed)
}

fn secret_manager(dict: Dictionary, secret: &str) -> SessionManager {
    let k = dict.index_of(secret).unwrap();
    let d = dict.len();
    let ctx = GameContext::new(dict, vec![HiderStrategy::point_mass(d, k)], 0, 0.0, TieBreak::default(), 1, "test")
        .unwrap();
    SessionManager::new(ctx, 1)
}

#[test]
fn machine_opens_then_finds_sole_survivor() {
    let m = uniform_manager(chain(), 0);
    let s = m.create(Role::Hider).unwrap();
    assert_eq!(s.pending_guess.as_deref(), Some("AB"));
    assert!(s.transcript.is_empty());
    let s = m.answer(&s.id, 0).unwrap();
    assert_eq!(s.pending_guess.as_deref(), Some("CD"));
    let s = m.answer(&s.id, 2).unwrap();
    assert_eq!(s.status, Status::Finished);
    assert_eq!(s.guess_count, 2);
    assert_eq!(s.pending_guess, None);
    assert_eq!(s.sampled_t, Some(0));
}

#[test]
fn immediate_win_takes_one_guess() {
    let m = uniform_manager(chain(), 0);
    let s = m.create(Role::Hider).unwrap();
    let s = m.answer(&s.id, 2).unwrap();
    assert_eq!(s.status, Status::Finished);
    assert_eq!(s.guess_count, 1);
    assert!(matches!(m.answer(&s.id, 0), Err(ServiceError::Conflict(_))));
}

#[test]
fn contradictory_answers_end_the_session() {
    let m = uniform_manager(chain(), 0);
    let s = m.create(Role::Hider).unwrap();
    // AB scores 1 only against BC, and BC then cannot score 0.
    let s = m.answer(&s.id, 1).unwrap();
    assert_eq!(s.pending_guess.as_deref(), Some("BC"));
    let s = m.answer(&s.id, 0).unwrap();
    assert_eq!(s.status, Status::Contradiction);
    assert!(s.message.unwrap().contains("no consistent words"));
    assert!(matches!(m.answer(&s.id, 0), Err(ServiceError::Conflict(_))));
}

#[test]
fn answer_range_is_validated() {
    let m = uniform_manager(chain(), 0);
    let s = m.create(Role::Hider).unwrap();
    assert!(matches!(m.answer(&s.id, 3), Err(ServiceError::Validation { reason: None, .. })));
    assert_eq!(m.get(&s.id).unwrap().guess_count, 0);
}

#[test]
fn human_guesser_scores_common_letters() {
    let m = secret_manager(twl06(5).unwrap(), "GIANT");
    let s = m.create(Role::Guesser).unwrap();
    assert_eq!(s.secret, None);
    let out = m.guess(&s.id, "pecan").unwrap();
    assert_eq!(out.answer, 2);
    assert!(!out.win);
    assert_eq!(out.session.secret, None);

    let err = m.guess(&s.id, "APPLE").unwrap_err();
    match err {
        ServiceError::Validation { reason, .. } => assert_eq!(reason, Some(jotto::Rejection::DuplicateLetters)),
        e => panic!("unexpected {e:?}"),
    }
    assert!(matches!(
        m.guess(&s.id, "GIANTS"),
        Err(ServiceError::Validation { reason: Some(jotto::Rejection::Length), .. })
    ));
    assert!(matches!(
        m.guess(&s.id, "ZZZZZ"),
        Err(ServiceError::Validation { reason: Some(jotto::Rejection::DuplicateLetters), .. })
    ));

    let out = m.guess(&s.id, "GIANT").unwrap();
    assert_eq!(out.answer, 5);
    assert!(out.win);
    assert_eq!(out.session.status, Status::Finished);
    assert_eq!(out.session.guess_count, 2);
    assert_eq!(out.session.secret.as_deref(), Some("GIANT"));
    assert_eq!(m.get(&s.id).unwrap().secret.as_deref(), Some("GIANT"));
    assert!(matches!(m.guess(&s.id, "GIANT"), Err(ServiceError::Conflict(_))));
}

#[test]
fn anagram_excluded_guess_names_the_reason() {
    let dict = Dictionary::from_words(["AB", "BA", "CD", "EF"], 2).unwrap();
    let m = secret_manager(dict, "CD");
    let s = m.create(Role::Guesser).unwrap();
    assert!(matches!(
        m.guess(&s.id, "BA"),
        Err(ServiceError::Validation { reason: Some(jotto::Rejection::AnagramExcluded), .. })
    ));
    assert!(matches!(
        m.guess(&s.id, "GH"),
        Err(ServiceError::Validation { reason: Some(jotto::Rejection::Unknown), .. })
    ));
}

#[test]
fn single_word_dictionary_secret() {
    let m = uniform_manager(Dictionary::from_words(["QI"], 2).unwrap(), 3);
    let s = m.create(Role::Guesser).unwrap();
    let out = m.guess(&s.id, "QI").unwrap();
    assert!(out.win);
    assert_eq!(out.session.secret.as_deref(), Some("QI"));
}

#[test]
fn wrong_role_and_unknown_session() {
    let m = uniform_manager(chain(), 0);
    let hider = m.create(Role::Hider).unwrap();
    let guesser = m.create(Role::Guesser).unwrap();
    assert_ne!(hider.id, guesser.id);
    assert!(matches!(m.guess(&hider.id, "AB"), Err(ServiceError::Conflict(_))));
    assert!(matches!(m.answer(&guesser.id, 0), Err(ServiceError::Conflict(_))));
    assert!(matches!(m.get("nope"), Err(ServiceError::NotFound(_))));
}

#[test]
fn unavailable_without_artifacts() {
    let m = SessionManager::unavailable();
    assert!(matches!(m.create(Role::Hider), Err(ServiceError::Unavailable)));
    assert!(matches!(m.meta(), Err(ServiceError::Unavailable)));
}

#[test]
fn idle_sessions_expire() {
    let m = uniform_manager(chain(), 0).with_idle_expiry(Duration::ZERO);
    let s = m.create(Role::Hider).unwrap();
    assert!(matches!(m.get(&s.id), Err(ServiceError::NotFound(_))));
    assert_eq!(m.live_sessions(), 0);

    let m = uniform_manager(chain(), 0);
    m.create(Role::Hider).unwrap();
    assert_eq!(m.live_sessions(), 1);
}

#[test]
fn transcript_log_records_every_event() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("games.jsonl");
    let m = uniform_manager(chain(), 0).with_transcript_log(&path).unwrap();
    let s = m.create(Role::Hider).unwrap();
    m.answer(&s.id, 0).unwrap();
    m.answer(&s.id, 2).unwrap();
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["event"], "create");
    assert_eq!(lines[0]["guess"], "AB");
    assert_eq!(lines[1]["answer"], 0);
    assert_eq!(lines[2]["guess"], "CD");
    assert_eq!(lines[2]["status"], "finished");
    assert!(lines.iter().all(|l| l["session"] == s.id.as_str()));
}

fn solved_two_letter(seed: u64) -> (Dictionary, SessionManager, HiderStrategy) {
    let d = twl06(2).unwrap();
    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(60), &mut sink).unwrap();
    let best = a.best_hider_strategy.clone();
    let ctx = GameContext::new(
        d.clone(),
        sink.strategies,
        a.best_iteration,
        a.best_eps,
        TieBreak::default(),
        seed,
        "test",
    )
    .unwrap();
    (d, SessionManager::new(ctx, seed), best)
}

fn secret_counts(d: &Dictionary, m: &SessionManager, n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; d.len()];
    for _ in 0..n {
        let s = m.create(Role::Guesser).unwrap();
        // Guessing every word in turn reveals the secret.
        let secret = d
            .words()
            .iter()
            .find_map(|w| {
                let out = m.guess(&s.id, w).unwrap();
                out.win.then(|| out.session.secret.unwrap())
            })
            .unwrap();
        counts[d.index_of(&secret).unwrap()] += 1;
    }
    counts
}

#[test]
fn machine_secret_frequencies_within_three_standard_errors() {
    let d = Dictionary::from_words(["AB", "BC", "CD", "DE", "EA", "AC"], 2).unwrap();
    let mut sink = MemorySink::default();
    let a = solve(&d, &SolveConfig::new(30), &mut sink).unwrap();
    let best = a.best_hider_strategy.clone();
    let ctx = GameContext::new(d.clone(), sink.strategies, a.best_iteration, a.best_eps, TieBreak::default(), 99, "test")
        .unwrap();
    let m = SessionManager::new(ctx, 99);
    let n = 10_000;
    let counts = secret_counts(&d, &m, n);
    for (k, (&c, &p)) in counts.iter().zip(best.probs()).enumerate() {
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let freq = c as f64 / n as f64;
        assert!((freq - p).abs() <= 3.0 * se, "{}: {freq} vs {p}", d.word(k));
    }
}

#[test]
fn machine_secret_frequencies_pass_chi_square_on_two_letter_game() {
    let (d, m, best) = solved_two_letter(99);
    let n = 10_000;
    let counts = secret_counts(&d, &m, n);
    let mut chi2 = 0.0;
    let mut support = 0usize;
    for (k, (&c, &p)) in counts.iter().zip(best.probs()).enumerate() {
        if p == 0.0 {
            assert_eq!(c, 0, "{} is outside the support", d.word(k));
            continue;
        }
        support += 1;
        let expected = p * n as f64;
        chi2 += (c as f64 - expected).powi(2) / expected;
    }
    // Wilson-Hilferty approximation of the 99.9th percentile.
    let k = (support - 1) as f64;
    let bound = k * (1.0 - 2.0 / (9.0 * k) + 3.09 * (2.0 / (9.0 * k)).sqrt()).powi(3);
    assert!(chi2 < bound, "chi2 = {chi2}, bound = {bound}");
}

#[test]
fn machine_guesser_replays_engine_loop() {
    let (d, m, _) = solved_two_letter(5);
    let strategies = replay_strategies(&d);
    for hidden in 0..d.len() {
        let mut s = m.create(Role::Hider).unwrap();
        while s.status == Status::Active {
            let guess = d.index_of(s.pending_guess.as_deref().unwrap()).unwrap();
            s = m.answer(&s.id, d.common(hidden, guess) as usize).unwrap();
            assert!(s.guess_count <= d.len());
        }
        assert_eq!(s.status, Status::Finished);
        assert_eq!(s.transcript.last().unwrap().guess, d.word(hidden));

        // Offline replay with the revealed mixture component.
        let t = s.sampled_t.unwrap();
        let mut state = GameState::full(d.len());
        for mv in &s.transcript {
            let g = guesser_gbr(&d, &strategies[t], &state, TieBreak::default()).unwrap();
            assert_eq!(d.word(g), mv.guess);
            state = update_state(&d, &state, g, mv.answer);
        }
    }
}

fn replay_strategies(d: &Dictionary) -> Vec<HiderStrategy> {
    let mut sink = MemorySink::default();
    solve(d, &SolveConfig::new(60), &mut sink).unwrap();
    sink.strategies
}
