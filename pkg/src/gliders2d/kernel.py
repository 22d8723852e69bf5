"""Compiled hot loop for full-match execution.

The per-cycle pipeline (intercept estimates, pressing decisions, formation
interpolation, Voronoi positioning, pass planning, physics) runs entirely
inside one numba-compiled function over flat arrays, which is what makes a
6000-cycle match cheap enough for thousand-game series.  The pure-python
modules remain the behavioral contract; the decision helpers here mirror
them and are cross-checked by tests.

All positions fed to per-team helpers are in the acting team's local frame
(attack toward +x); the main loop mirrors coordinates for the right side.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

# --- server parameter vector layout -----------------------------------------
SP_MAX_DASH = 0
SP_DASH_RATE = 1
SP_PLAYER_DECAY = 2
SP_BALL_DECAY = 3
SP_MAX_PSPEED = 4
SP_MAX_BSPEED = 5
SP_KICKABLE = 6
SP_PLAYER_RADIUS = 7
SP_STAMINA_MAX = 8
SP_STAMINA_INC = 9
SP_MAX_TURN = 10
SP_GOAL_HALF = 11
SP_KICK_RATE = 12
SP_KICK_NOISE = 13
SP_RECOVER_THR = 14
NSP = 15

# --- team parameter vector layout --------------------------------------------
TP_PRESS_DEFAULT = 0
TP_PRESS_MID = 1
TP_PRESS_FLANK = 2
TP_PRESS_NAMED = 3  # resolved against the opponent name; < 0 means absent
TP_EVAL_DEPTH = 4
TP_EVAL_W_FAR = 5
TP_EVAL_W_NEAR = 6
TP_EVAL_BONUS = 7
TP_RISK_T = 8
TP_RISK_L = 9
TP_RISK_D = 10
TP_OPP_STEP_RISK = 11
TP_PASS_MAX_X = 12
TP_PASS_MIN_Y = 13
TP_PASS_CUT = 14
TP_PASS_ANGLE = 15
TP_PASS_DEPTH = 16
TP_USE_R1 = 17
TP_USE_R2 = 18
TP_USE_R3 = 19
TP_USE_R4 = 20
TP_USE_PRESSING = 21
TP_USE_EVAL = 22
TP_USE_POSITIONING = 23
TP_USE_RISK = 24
TP_BASE_PRESSING = 25
NTP = 26

# Runtime rule features (same order as hbec.CONDITION_FEATURES).
FEAT_BALL_X = 0
FEAT_BALL_Y = 1
FEAT_ABS_BALL_Y = 2
FEAT_SELF_X = 3
FEAT_SELF_Y = 4
FEAT_ROLE = 5
FEAT_OFFSIDE_GAP = 6
FEAT_INTERCEPT_MARGIN = 7
FEAT_SELF_MIN = 8
NFEAT = 9

SENTINEL = 1000
HORIZON = 120
TURN_ALIGN = 15.0
VOR_REFRESH = 8
MAXC = 232  # voronoi candidate cap: C(11,3) + C(11,2) + margin
MAXN = 84  # holder candidate cap: 10 mates x 7 points + 8 dribbles + shoot
BEAM = 1

MODE_KICKOFF = 0
MODE_PLAY_ON = 1
MODE_GOAL = 2
MODE_OUT = 3

_U64 = np.uint64


@njit(cache=True, nogil=True)
def rng_next(state):
    """splitmix64 step; returns (new_state, uniform float in [0, 1))."""
    state = state + _U64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    z = z ^ (z >> _U64(31))
    return state, float(z >> _U64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, nogil=True)
def norm180(a):
    a = a % 360.0
    if a > 180.0:
        a -= 360.0
    return a


@njit(cache=True, nogil=True)
def bearing(dx, dy):
    return math.degrees(math.atan2(dy, dx))


@njit(cache=True, nogil=True)
def dash_table(sp, out):
    """Cumulative max-power dash distance from rest, one entry per cycle."""
    v = 0.0
    out[0] = 0.0
    accel = sp[SP_MAX_DASH] * sp[SP_DASH_RATE]
    for k in range(1, out.shape[0]):
        v = v * sp[SP_PLAYER_DECAY] + accel
        if v > sp[SP_MAX_PSPEED]:
            v = sp[SP_MAX_PSPEED]
        out[k] = out[k - 1] + v
    return out


@njit(cache=True, nogil=True)
def ball_pred_table(bx, by, vx, vy, decay, out):
    n = out.shape[0]
    for i in range(n):
        out[i, 0] = bx
        out[i, 1] = by
        bx += vx
        by += vy
        vx *= decay
        vy *= decay
    return out


@njit(cache=True, nogil=True)
def steps_for_dist(d, table):
    """First cycle count whose cumulative dash distance covers ``d``."""
    hi = table.shape[0] - 1
    if table[hi] < d:
        return SENTINEL
    lo = 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if table[mid] >= d:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True, nogil=True)
def cycles_to_point(px, py, body, tx, ty, control, table):
    """(n_turn, n_dash) to bring a point within ``control`` of the target."""
    dx = tx - px
    dy = ty - py
    d = math.sqrt(dx * dx + dy * dy) - control
    if d <= 1e-9:
        return 0, 0
    n_turn = 0
    if abs(norm180(bearing(dx, dy) - body)) > TURN_ALIGN:
        n_turn = 1
    return n_turn, steps_for_dist(d, table)


COS_TURN_ALIGN = math.cos(math.radians(TURN_ALIGN))


@njit(cache=True, nogil=True)
def cycles_to_point_cs(px, py, cb, sb, tx, ty, control, table):
    """cycles_to_point with the body direction given as (cos, sin); the
    aligned test compares cosines, avoiding atan2 in hot loops."""
    dx = tx - px
    dy = ty - py
    dist = math.sqrt(dx * dx + dy * dy)
    d = dist - control
    if d <= 1e-9:
        return 0, 0
    n_turn = 0
    if dx * cb + dy * sb < COS_TURN_ALIGN * dist:
        n_turn = 1
    return n_turn, steps_for_dist(d, table)


@njit(cache=True, nogil=True)
def intercept_cycles_arr(px, py, body, pred, kickable, table):
    """Minimum cycle at which the player reaches the predicted ball.

    Starts at a safe lower bound (ball step <= first-cycle ball speed,
    player advance <= table slope) and defers the turn check until the
    no-turn reach test passes, which keeps the loop nearly trig-free."""
    horizon = pred.shape[0] - 1
    dx0 = pred[0, 0] - px
    dy0 = pred[0, 1] - py
    d0 = math.sqrt(dx0 * dx0 + dy0 * dy0)
    bstep = math.sqrt(
        (pred[1, 0] - pred[0, 0]) ** 2 + (pred[1, 1] - pred[0, 1]) ** 2
    )
    pstep = table[table.shape[0] - 1] - table[table.shape[0] - 2]
    if table[1] > pstep:
        pstep = table[1]
    start = int((d0 - kickable) / (bstep + pstep + 1e-9))
    if start < 0:
        start = 0
    kick_eps = kickable + 1e-9
    for n in range(start, horizon + 1):
        dx = pred[n, 0] - px
        dy = pred[n, 1] - py
        d2 = dx * dx + dy * dy
        if d2 <= kick_eps * kick_eps:
            return n
        best_reach = kickable + table[n] + 1e-9
        if d2 > best_reach * best_reach:
            continue
        n_turn = 0
        if abs(norm180(bearing(dx, dy) - body)) > TURN_ALIGN:
            n_turn = 1
        k = n - n_turn
        if k >= 0:
            reach = kickable + table[k] + 1e-9
            if d2 <= reach * reach:
                return n
    return SENTINEL


@njit(cache=True, nogil=True)
def offside_lines(pos):
    """(left frame value, right frame value): max(ball-free second-deepest
    defender, 0); the ball term is applied by the caller."""
    # second largest x among right players (defenders for left's attack)
    max1 = -1e18
    max2 = -1e18
    for i in range(11, 22):
        x = pos[i, 0]
        if x > max1:
            max2 = max1
            max1 = x
        elif x > max2:
            max2 = x
    # second smallest x among left players, mirrored into right frame
    min1 = 1e18
    min2 = 1e18
    for i in range(0, 11):
        x = pos[i, 0]
        if x < min1:
            min2 = min1
            min1 = x
        elif x < min2:
            min2 = x
    return max2, -min2


@njit(cache=True, nogil=True)
def rule_value(tp, rules_target, rules_value, rules_cond, feats, idx):
    """Team parameter ``idx`` after runtime design-point rules, in order."""
    v = tp[idx]
    for r in range(rules_target.shape[0]):
        if rules_target[r] != idx:
            continue
        ok = True
        for c in range(rules_cond.shape[1]):
            feat = int(rules_cond[r, c, 0])
            if feat < 0:
                break
            value = feats[feat]
            op = int(rules_cond[r, c, 1])
            thr = rules_cond[r, c, 2]
            if op == 0:
                good = value < thr
            elif op == 1:
                good = value <= thr
            elif op == 2:
                good = abs(value - thr) <= 1e-9
            elif op == 3:
                good = value >= thr
            else:
                good = value > thr
            if not good:
                ok = False
                break
        if ok:
            v = rules_value[r]
    return v


@njit(cache=True, nogil=True)
def pressing_value(tp, rules_target, rules_value, rules_cond, feats, ball_x, ball_y, self_x, role):
    """Pressing allowance; the baseline team uses the hard-coded level."""
    if rule_value(tp, rules_target, rules_value, rules_cond, feats, TP_USE_PRESSING) < 0.5:
        return int(tp[TP_BASE_PRESSING])
    p = rule_value(tp, rules_target, rules_value, rules_cond, feats, TP_PRESS_DEFAULT)
    if role >= 6 and role <= 8 and ball_x > -30.0 and self_x < 10.0:
        p = rule_value(tp, rules_target, rules_value, rules_cond, feats, TP_PRESS_MID)
    if abs(ball_y) > 22.0 and ball_x < 0.0 and ball_x > -36.5 and (role == 4 or role == 5):
        p = rule_value(tp, rules_target, rules_value, rules_cond, feats, TP_PRESS_FLANK)
    named = rule_value(tp, rules_target, rules_value, rules_cond, feats, TP_PRESS_NAMED)
    if named >= 0.0:
        p = named
    return int(round(p))


@njit(cache=True, nogil=True)
def should_press_nb(self_min, mate_min, opp_min, pressing, teammate_kickable):
    if teammate_kickable:
        return False
    return self_min <= 3 or (self_min <= mate_min and self_min < opp_min + pressing)


@njit(cache=True, nogil=True)
def baseline_dash_nb(stamina, dist_ball, ball_x, sp):
    """Mirror of behaviors.baseline_dash_power; change both together."""
    if stamina < 0.3 * sp[SP_STAMINA_MAX]:
        return 0.4 * sp[SP_MAX_DASH]
    near = dist_ball < 20.0
    if ball_x < 0.0:
        return (0.8 if near else 0.65) * sp[SP_MAX_DASH]
    return (0.75 if near else 0.55) * sp[SP_MAX_DASH]


@njit(cache=True, nogil=True)
def dash_power_nb(tp_r1, tp_r2, tp_r3, tp_r4, ball_x, self_x, offside, role,
                  mate_min, opp_min, stamina, dist_ball, sp):
    """Ordered else-if chain of maximal-power overrides over the baseline."""
    if tp_r1 >= 0.5 and ball_x > 0.0 and self_x < offside and abs(ball_x - self_x) < 25.0:
        return sp[SP_MAX_DASH]
    elif tp_r2 >= 0.5 and ball_x < 10.0 and role >= 2 and role <= 5:
        return sp[SP_MAX_DASH]
    elif tp_r3 >= 0.5 and ball_x < -10.0 and role >= 6 and role <= 8:
        return sp[SP_MAX_DASH]
    elif tp_r4 >= 0.5 and ball_x > 36.0 and self_x > 36.0 and mate_min < opp_min - 4:
        return sp[SP_MAX_DASH]
    return baseline_dash_nb(stamina, dist_ball, ball_x, sp)


@njit(cache=True, nogil=True)
def sector_count_nb(self_x, self_y, opp, goalie_idx):
    """Non-goalie opponents in the sector toward the goal posts."""
    left_ang = bearing(52.5 - self_x, -8.0 - self_y)
    right_ang = bearing(52.5 - self_x, 8.0 - self_y)
    span = (right_ang - left_ang) % 360.0
    count = 0
    for i in range(opp.shape[0]):
        if i == goalie_idx:
            continue
        dx = opp[i, 0] - self_x
        dy = opp[i, 1] - self_y
        if dx * dx + dy * dy < 1e-18:
            count += 1
            continue
        off = (bearing(dx, dy) - left_ang) % 360.0
        if off <= span:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Voronoi candidates (vertices + offside-line crossings), local frame


@njit(cache=True, nogil=True)
def voronoi_candidates_nb(sites, line_x, min_x, cand):
    """Candidate points: Voronoi vertices of ``sites`` plus intersections of
    the diagram's segments with the vertical line, filtered to the field
    and to x >= min_x (forward relevance).  Returns the count written into
    ``cand``."""
    n = sites.shape[0]
    count = 0
    # Vertices: circumcenters of site triples with no closer site.
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ax = sites[i, 0]
                ay = sites[i, 1]
                bx = sites[j, 0]
                by = sites[j, 1]
                cx = sites[k, 0]
                cy = sites[k, 1]
                d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
                if abs(d) < 1e-12:
                    continue
                a2 = ax * ax + ay * ay
                b2 = bx * bx + by * by
                c2 = cx * cx + cy * cy
                ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
                uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
                if abs(uy) >= 34.0 or abs(ux) >= 52.5 or ux < min_x:
                    continue
                r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy)
                ok = True
                for m in range(n):
                    if m == i or m == j or m == k:
                        continue
                    dx = sites[m, 0] - ux
                    dy = sites[m, 1] - uy
                    if dx * dx + dy * dy < r2 - 1e-9:
                        ok = False
                        break
                if ok and count < cand.shape[0]:
                    cand[count, 0] = ux
                    cand[count, 1] = uy
                    count += 1
    # Line crossings: bisector of each nearest pair intersected with x=line.
    if abs(line_x) < 52.5 and line_x >= min_x:
        for i in range(n):
            for j in range(i + 1, n):
                yi = sites[i, 1]
                yj = sites[j, 1]
                if abs(yi - yj) < 1e-12:
                    continue
                xi = sites[i, 0]
                xj = sites[j, 0]
                y = ((yi * yi - yj * yj) + (line_x - xi) * (line_x - xi)
                     - (line_x - xj) * (line_x - xj)) / (2.0 * (yi - yj))
                if abs(y) >= 34.0:
                    continue
                dx = line_x - xi
                dy = y - yi
                r2 = dx * dx + dy * dy
                ok = True
                for m in range(n):
                    if m == i or m == j:
                        continue
                    ddx = sites[m, 0] - line_x
                    ddy = sites[m, 1] - y
                    if ddx * ddx + ddy * ddy < r2 - 1e-9:
                        ok = False
                        break
                if ok and count < cand.shape[0]:
                    cand[count, 0] = line_x
                    cand[count, 1] = y
                    count += 1
    return count


@njit(cache=True, nogil=True)
def best_point_score_nb(cx, cy, opp, mine):
    """Open-space score with a goal-proximity pull; the pull keeps the
    in-match best point on the attacking side of the candidate cloud."""
    d_opp = 1e18
    for i in range(opp.shape[0]):
        dx = opp[i, 0] - cx
        dy = opp[i, 1] - cy
        d = dx * dx + dy * dy
        if d < d_opp:
            d_opp = d
    d_mine = 1e18
    for i in range(mine.shape[0]):
        dx = mine[i, 0] - cx
        dy = mine[i, 1] - cy
        d = dx * dx + dy * dy
        if d < d_mine:
            d_mine = d
    gx = 52.5 - cx
    d_goal = math.sqrt(gx * gx + cy * cy)
    return math.sqrt(d_opp) - 0.5 * math.sqrt(d_mine) - 0.4 * d_goal


@njit(cache=True, nogil=True)
def pick_best_point_nb(cand, n_cand, opp, mine):
    """Best candidate by score, ties toward larger x then smaller |y|;
    falls back to the opponent goal center."""
    if n_cand == 0:
        return 52.5, 0.0
    best_x = cand[0, 0]
    best_y = cand[0, 1]
    best_s = best_point_score_nb(best_x, best_y, opp, mine)
    for i in range(1, n_cand):
        s = best_point_score_nb(cand[i, 0], cand[i, 1], opp, mine)
        better = False
        if s > best_s + 1e-12:
            better = True
        elif s > best_s - 1e-12:
            if cand[i, 0] > best_x + 1e-12:
                better = True
            elif cand[i, 0] > best_x - 1e-12 and abs(cand[i, 1]) < abs(best_y) - 1e-12:
                better = True
        if better:
            best_x = cand[i, 0]
            best_y = cand[i, 1]
            best_s = s
    return best_x, best_y


@njit(cache=True, nogil=True)
def top3_candidates_nb(cand, n_cand, opp, mine, out):
    """Indices of the best three candidates by score into ``out``; returns
    how many were written."""
    k = 0
    for pick in range(3):
        best_i = -1
        best_s = -1e18
        best_x = -1e18
        best_y = 1e18
        for i in range(n_cand):
            used = False
            for j in range(k):
                if out[j] == i:
                    used = True
                    break
            if used:
                continue
            s = best_point_score_nb(cand[i, 0], cand[i, 1], opp, mine)
            better = False
            if s > best_s + 1e-12:
                better = True
            elif s > best_s - 1e-12:
                if cand[i, 0] > best_x + 1e-12:
                    better = True
                elif cand[i, 0] > best_x - 1e-12 and abs(cand[i, 1]) < abs(best_y) - 1e-12:
                    better = True
            if better:
                best_i = i
                best_s = s
                best_x = cand[i, 0]
                best_y = cand[i, 1]
        if best_i < 0:
            break
        out[k] = best_i
        k += 1
    return k


# ---------------------------------------------------------------------------
# Formation interpolation


@njit(cache=True, nogil=True)
def _bary_try(ballx, bally, fverts, ftris, fplayers, v_off, t, out):
    """Barycentric interpolation against one triangle; True on containment."""
    ia = v_off + ftris[t, 0]
    ib = v_off + ftris[t, 1]
    ic = v_off + ftris[t, 2]
    ax = fverts[ia, 0]
    ay = fverts[ia, 1]
    bx = fverts[ib, 0]
    by = fverts[ib, 1]
    cx = fverts[ic, 0]
    cy = fverts[ic, 1]
    denom = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if abs(denom) < 1e-15:
        return False
    w1 = ((bx - ballx) * (cy - bally) - (by - bally) * (cx - ballx)) / denom
    w2 = ((cx - ballx) * (ay - bally) - (cy - bally) * (ax - ballx)) / denom
    w3 = 1.0 - w1 - w2
    if w1 < -1e-12 or w2 < -1e-12 or w3 < -1e-12:
        return False
    for p in range(11):
        out[p, 0] = w1 * fplayers[ia, p, 0] + w2 * fplayers[ib, p, 0] + w3 * fplayers[ic, p, 0]
        out[p, 1] = w1 * fplayers[ia, p, 1] + w2 * fplayers[ib, p, 1] + w3 * fplayers[ic, p, 1]
    return True


@njit(cache=True, nogil=True)
def formation_targets_nb(ballx, bally, fverts, ftris, fplayers, foffsets, profile, hint, out):
    """Interpolate the 11 player targets for one profile at the ball point.
    ``hint`` is the triangle checked first (the ball rarely changes
    triangles between cycles); returns the containing triangle index.
    Points outside the stored hull snap to the nearest vertex's mapping."""
    v_off = foffsets[profile, 0]
    v_cnt = foffsets[profile, 1]
    t_off = foffsets[profile, 2]
    t_cnt = foffsets[profile, 3]
    if hint >= t_off and hint < t_off + t_cnt:
        if _bary_try(ballx, bally, fverts, ftris, fplayers, v_off, hint, out):
            return hint
    for t in range(t_off, t_off + t_cnt):
        if t == hint:
            continue
        if _bary_try(ballx, bally, fverts, ftris, fplayers, v_off, t, out):
            return t
    # outside hull: nearest vertex
    best = v_off
    best_d = 1e18
    for v in range(v_off, v_off + v_cnt):
        dx = fverts[v, 0] - ballx
        dy = fverts[v, 1] - bally
        d = dx * dx + dy * dy
        if d < best_d:
            best_d = d
            best = v
    for p in range(11):
        out[p, 0] = fplayers[best, p, 0]
        out[p, 1] = fplayers[best, p, 1]
    return -1


# ---------------------------------------------------------------------------
# Holder action planning


@njit(cache=True, nogil=True)
def eval_state_nb(now_x, after_x, after_y, opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval):
    """Action evaluator; the baseline metric applies when the evaluator is
    off, near the own half, or with no direct opponents ahead."""
    if use_eval < 0.5 or now_x < tp_depth or opp_forward == 0:
        dx = 52.5 - after_x
        dy = 0.0 - after_y
        bonus = tp_bonus - math.sqrt(dx * dx + dy * dy)
        if bonus < 0.0:
            bonus = 0.0
        return after_x + bonus
    w = tp_wf if now_x > 35.0 else tp_wn
    dx = bp_x - after_x
    dy = bp_y - after_y
    bonus = tp_bonus - math.sqrt(dx * dx + dy * dy)
    if bonus < 0.0:
        bonus = 0.0
    return after_x * w + bonus


@njit(cache=True, nogil=True)
def ball_steps_nb(dist, v0, decay, cap):
    if dist <= 1e-9:
        return 0
    covered = 0.0
    v = v0
    for n in range(1, cap):
        covered += v
        if covered >= dist:
            return n
        v *= decay
    return SENTINEL


@njit(cache=True, nogil=True)
def opp_step_nb(ox, oy, ocb, osb, ballx, bally, rpx, rpy, total, v0, decay,
                ball_steps, risk, kickable, pstep, t_start, table):
    """Earliest effective interception step for one opponent, trying each
    trajectory point; falls back to arrival at the receive point."""
    if total < 1e-9:
        return SENTINEL
    ux = (rpx - ballx) / total
    uy = (rpy - bally) / total
    # probe the trajectory where this opponent would strike: around its
    # projection onto the pass line, plus the receive point itself
    s_proj = (ox - ballx) * ux + (oy - bally) * uy
    if s_proj < 0.0:
        s_proj = 0.0
    elif s_proj > total:
        s_proj = total
    log_decay = math.log(decay)
    one_minus = 1.0 - decay
    for k3 in range(4):
        if k3 == 0:
            s = 0.6 * s_proj
        elif k3 == 1:
            s = s_proj
        elif k3 == 2:
            s = s_proj + 0.5 * (total - s_proj)
        else:
            s = total
        frac = 1.0 - s * one_minus / v0
        if frac <= 1e-9:
            t = ball_steps
        else:
            t = int(math.ceil(math.log(frac) / log_decay - 1e-12))
        if t < t_start:
            t = t_start
        if t < 1:
            t = 1
        if t > ball_steps:
            t = ball_steps
        covered = v0 * (1.0 - decay ** t) / one_minus
        if covered > total:
            covered = total
        px = ballx + ux * covered
        py = bally + uy * covered
        dx = px - ox
        dy = py - oy
        need = math.sqrt(dx * dx + dy * dy) - kickable
        if need > pstep * t:
            continue
        n_turn, n_dash = cycles_to_point_cs(ox, oy, ocb, osb, px, py, kickable, table)
        if n_dash >= SENTINEL:
            continue
        steps = n_turn + n_dash + risk if n_turn == 0 else n_turn + n_dash + 1
        if steps <= t:
            return t
    n_turn, n_dash = cycles_to_point_cs(ox, oy, ocb, osb, rpx, rpy, kickable, table)
    if n_dash >= SENTINEL:
        return SENTINEL
    return n_turn + n_dash + risk if n_turn == 0 else n_turn + n_dash + 1


@njit(cache=True, nogil=True)
def seg_dist(px, py, ax, ay, bx, by):
    """Distance from a point to the segment [a, b]."""
    abx = bx - ax
    aby = by - ay
    denom = abx * abx + aby * aby
    if denom < 1e-15:
        t = 0.0
    else:
        t = ((px - ax) * abx + (py - ay) * aby) / denom
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    cx = ax + t * abx - px
    cy = ay + t * aby - py
    return math.sqrt(cx * cx + cy * cy)


@njit(cache=True, nogil=True)
def enum_holder_nodes(
    mypos, mybody, opp, obody, opp_goalie_idx,
    holder_i, ballx, bally, offside,
    tp_risk_t, tp_risk_l, tp_risk_d, tp_opp_risk,
    tp_pass_max_x, tp_pass_min_y, tp_pass_cut, tp_pass_angle, tp_pass_depth,
    opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
    sp, table, trig, lbs,
    node_score, node_after, node_dir, node_power, node_recv, node_term,
):
    """Enumerate candidate holder actions (passes, dribbles, shot) with
    their evaluated scores.  Returns the node count."""
    kickable = sp[SP_KICKABLE]
    v0 = sp[SP_MAX_DASH] * sp[SP_KICK_RATE]
    if v0 > sp[SP_MAX_BSPEED]:
        v0 = sp[SP_MAX_BSPEED]
    decay = sp[SP_BALL_DECAY]
    count = 0

    for mate in range(11):
        if mate == holder_i:
            continue
        mx = mypos[mate, 0]
        my = mypos[mate, 1]
        mdx = mx - ballx
        mdy = my - bally
        if mdx * mdx + mdy * mdy > 42.0 * 42.0:
            continue
        # 0 = direct, 1 = leading, 2.. = through samples
        for pt in range(5):
            if pt == 0:
                rpx = mx
                rpy = my
                risk_first = tp_risk_d
                is_through = False
                is_lead = False
            elif pt == 1:
                rad = math.radians(mybody[mate])
                rpx = mx + 3.0 * math.cos(rad)
                rpy = my + 3.0 * math.sin(rad)
                risk_first = tp_risk_l
                is_through = False
                is_lead = True
            else:
                rpx = offside + 3.0 * (pt - 1)
                rpy = my
                risk_first = tp_risk_t
                is_through = True
                is_lead = False
            if abs(rpx) >= 52.5 or abs(rpy) >= 34.0:
                continue
            ddx = rpx - ballx
            ddy = rpy - bally
            dist = math.sqrt(ddx * ddx + ddy * ddy)
            if dist < 1.0:
                continue
            bsteps = ball_steps_nb(dist, v0, decay, 80)
            if bsteps >= SENTINEL:
                continue
            n_turn, n_dash = cycles_to_point_cs(mx, my, trig[0, mate], trig[1, mate], rpx, rpy, kickable, table)
            if n_dash >= SENTINEL:
                continue
            step = bsteps
            if n_turn + n_dash > step:
                step = n_turn + n_dash
            if step < 1:
                step = 1
            kick_count = 1 if dist <= 20.0 else 2

            # first-fragment risk gate
            risk = 0.0
            if ballx < offside and rpx > offside + 3.0 and offside - mx < 5.0:
                risk = risk_first

            move_angle = bearing(ddx, ddy)
            pstep = table[table.shape[0] - 1] - table[table.shape[0] - 2]
            if table[1] > pstep:
                pstep = table[1]
            # nearest-to-corridor opponent first: it sets a tight bound so
            # the remaining ten are usually pruned without full probing
            for o in range(11):
                lbs[o] = (seg_dist(opp[o, 0], opp[o, 1], ballx, bally, rpx, rpy) - kickable) / pstep
            first = 0
            for o in range(1, 11):
                if lbs[o] < lbs[first]:
                    first = o
            o_step = SENTINEL
            for scan in range(11):
                o = first if scan == 0 else scan
                if scan != 0 and o == first:
                    continue
                lb = lbs[o]
                if lb >= o_step:
                    continue
                orisk = 0
                if tp_opp_risk > 0.0 and (is_through or is_lead):
                    odir = bearing(opp[o, 0] - ballx, opp[o, 1] - bally)
                    if (
                        (rpx < tp_pass_max_x or abs(rpy) > tp_pass_min_y)
                        and abs(norm180(move_angle - odir)) > tp_pass_cut
                        and abs(move_angle) < tp_pass_angle
                        and ballx < offside
                        and rpx > offside + tp_pass_depth
                    ):
                        orisk = int(tp_opp_risk)
                arr = opp_step_nb(
                    opp[o, 0], opp[o, 1], trig[2, o], trig[3, o], ballx, bally, rpx, rpy,
                    dist, v0, decay, bsteps, orisk, kickable, pstep, int(lb), table,
                )
                if arr < o_step:
                    o_step = arr
            # feasibility
            if is_through:
                if o_step + risk <= step:
                    continue
            else:
                if o_step + risk <= step + (kick_count - 1):
                    continue
            if count >= node_score.shape[0]:
                break
            node_after[count, 0] = rpx
            node_after[count, 1] = rpy
            node_dir[count] = move_angle
            node_power[count] = sp[SP_MAX_DASH]
            node_recv[count] = mate
            node_term[count] = 0
            node_score[count] = eval_state_nb(
                ballx, rpx, rpy, opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
            )
            count += 1

    # dribbles: 8 compass offsets of 3 m
    for d8 in range(8):
        ang = 45.0 * d8
        rad = math.radians(ang)
        ax = ballx + 3.0 * math.cos(rad)
        ay = bally + 3.0 * math.sin(rad)
        if abs(ax) >= 52.5 or abs(ay) >= 34.0:
            continue
        hdx = mypos[holder_i, 0] - ax
        hdy = mypos[holder_i, 1] - ay
        hd2 = hdx * hdx + hdy * hdy
        blocked = False
        for o in range(11):
            dx = opp[o, 0] - ax
            dy = opp[o, 1] - ay
            d2 = dx * dx + dy * dy
            # blocked only when an opponent is close AND beats the holder there
            if d2 < 1.8 * 1.8 and d2 < hd2 + 1.0:
                blocked = True
                break
        if blocked:
            continue
        if count >= node_score.shape[0]:
            break
        node_after[count, 0] = ax
        node_after[count, 1] = ay
        node_dir[count] = ang
        node_power[count] = 31.0
        node_recv[count] = holder_i
        node_term[count] = 0
        node_score[count] = eval_state_nb(
            ballx, ax, ay, opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
        )
        count += 1

    # shot
    hx = mypos[holder_i, 0]
    hy = mypos[holder_i, 1]
    gdx = 52.5 - hx
    if math.sqrt(gdx * gdx + hy * hy) < 20.0 and count < node_score.shape[0]:
        corner = sp[SP_GOAL_HALF] - 0.8
        ty = -corner
        if opp_goalie_idx >= 0:
            gly = opp[opp_goalie_idx, 1]
            if abs(gly - (-corner)) < abs(gly - corner):
                ty = corner
        node_after[count, 0] = 52.5
        node_after[count, 1] = ty
        node_dir[count] = bearing(52.5 - ballx, ty - bally)
        node_power[count] = sp[SP_MAX_DASH]
        node_recv[count] = holder_i
        node_term[count] = 1
        node_score[count] = eval_state_nb(
            ballx, 52.5, ty, opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
        )
        count += 1
    return count


@njit(cache=True, nogil=True)
def holder_action_nb(
    mypos, mybody, opp, obody, opp_goalie_idx, opp_second_deep,
    holder_i, ballx, bally, offside,
    tp_risk_t, tp_risk_l, tp_risk_d, tp_opp_risk,
    tp_pass_max_x, tp_pass_min_y, tp_pass_cut, tp_pass_angle, tp_pass_depth,
    opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
    sp, table, trig, lbs,
    node_score, node_after, node_dir, node_power, node_recv, node_term,
    scratch_score, scratch_after, scratch_dir, scratch_power, scratch_recv, scratch_term,
    mypos2,
):
    """Depth-2 beam search over holder actions; returns (power, direction).

    A clear shot preempts planning entirely (strict-shot rule): inside
    range, the corner whose shot line stays clear of every opponent wins.
    Otherwise a node's first action is the level-1 kick that reaches it; a
    strong continuation found while expanding a node credits that action.
    """
    for q in range(11):
        rad = math.radians(mybody[q])
        trig[0, q] = math.cos(rad)
        trig[1, q] = math.sin(rad)
        rad = math.radians(obody[q])
        trig[2, q] = math.cos(rad)
        trig[3, q] = math.sin(rad)

    hx = mypos[holder_i, 0]
    hy = mypos[holder_i, 1]
    gdx = 52.5 - hx
    if math.sqrt(gdx * gdx + hy * hy) < 20.0:
        corner = sp[SP_GOAL_HALF] - 0.8
        best_ty = 0.0
        best_clear = -1.0
        for c2 in range(2):
            ty = -corner if c2 == 0 else corner
            clear = 1e18
            for o in range(11):
                d = seg_dist(opp[o, 0], opp[o, 1], ballx, bally, 52.5, ty)
                if d < clear:
                    clear = d
            if clear > best_clear:
                best_clear = clear
                best_ty = ty
        if best_clear > 1.3:
            return sp[SP_MAX_DASH], bearing(52.5 - ballx, best_ty - bally)

    count = enum_holder_nodes(
        mypos, mybody, opp, obody, opp_goalie_idx,
        holder_i, ballx, bally, offside,
        tp_risk_t, tp_risk_l, tp_risk_d, tp_opp_risk,
        tp_pass_max_x, tp_pass_min_y, tp_pass_cut, tp_pass_angle, tp_pass_depth,
        opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
        sp, table, trig, lbs,
        node_score, node_after, node_dir, node_power, node_recv, node_term,
    )
    if count == 0:
        return sp[SP_MAX_DASH], bearing(52.5 - ballx, 0.0 - bally)

    best_i = 0
    best_s = node_score[0]
    for i in range(1, count):
        if node_score[i] > best_s + 1e-12:
            best_s = node_score[i]
            best_i = i

    beam = BEAM if (ballx > 0.0 and best_s < ballx + 25.0) else 0
    for _ in range(beam):
        # next unexpanded non-terminal node by score (term -1 = expanded)
        pick = -1
        pick_s = -1e18
        for i in range(count):
            if node_term[i] != 0:
                continue
            if node_score[i] > pick_s + 1e-12:
                pick = i
                pick_s = node_score[i]
        if pick < 0:
            break
        node_term[pick] = -1

        for p in range(11):
            mypos2[p, 0] = mypos[p, 0]
            mypos2[p, 1] = mypos[p, 1]
        recv = node_recv[pick]
        nbx = node_after[pick, 0]
        nby = node_after[pick, 1]
        mypos2[recv, 0] = nbx
        mypos2[recv, 1] = nby
        offside2 = opp_second_deep
        if nbx > offside2:
            offside2 = nbx
        if offside2 < 0.0:
            offside2 = 0.0
        child_count = enum_holder_nodes(
            mypos2, mybody, opp, obody, opp_goalie_idx,
            recv, nbx, nby, offside2,
            tp_risk_t, tp_risk_l, tp_risk_d, tp_opp_risk,
            tp_pass_max_x, tp_pass_min_y, tp_pass_cut, tp_pass_angle, tp_pass_depth,
            opp_forward, bp_x, bp_y, tp_depth, tp_wf, tp_wn, tp_bonus, use_eval,
            sp, table, trig, lbs,
            scratch_score, scratch_after, scratch_dir, scratch_power, scratch_recv, scratch_term,
        )
        for c in range(child_count):
            if scratch_score[c] > best_s + 1e-12:
                best_s = scratch_score[c]
                best_i = pick

    return node_power[best_i], node_dir[best_i]


# ---------------------------------------------------------------------------
# Kickoff reset and the main loop


@njit(cache=True, nogil=True)
def do_restart_nb(receiving, pos, vel, body, ball, bvel):
    """Dead-ball restart: clamp the ball into the field, stop it, and hand
    it to the nearest player of the receiving side."""
    bx = ball[0]
    if bx > 52.0:
        bx = 52.0
    elif bx < -52.0:
        bx = -52.0
    by = ball[1]
    if by > 33.5:
        by = 33.5
    elif by < -33.5:
        by = -33.5
    ball[0] = bx
    ball[1] = by
    bvel[0] = 0.0
    bvel[1] = 0.0
    rbase = 0 if receiving == 0 else 11
    nearest = rbase
    nearest_d2 = 1e18
    for i in range(rbase, rbase + 11):
        dx = pos[i, 0] - bx
        dy = pos[i, 1] - by
        d2 = dx * dx + dy * dy
        if d2 < nearest_d2:
            nearest_d2 = d2
            nearest = i
    attack = 1.0 if receiving == 0 else -1.0
    pos[nearest, 0] = bx - attack * 0.7
    pos[nearest, 1] = by
    vel[nearest, 0] = 0.0
    vel[nearest, 1] = 0.0
    body[nearest] = 0.0 if receiving == 0 else 180.0


@njit(cache=True, nogil=True)
def reset_kickoff_nb(kick_side, pos, vel, body, ball, bvel,
                     fverts_l, ftris_l, fplayers_l, foffs_l,
                     fverts_r, ftris_r, fplayers_r, foffs_r, ftargets):
    ball[0] = 0.0
    ball[1] = 0.0
    bvel[0] = 0.0
    bvel[1] = 0.0
    formation_targets_nb(0.0, 0.0, fverts_l, ftris_l, fplayers_l, foffs_l, 0, -1, ftargets)
    for i in range(11):
        pos[i, 0] = ftargets[i, 0]
        pos[i, 1] = ftargets[i, 1]
        vel[i, 0] = 0.0
        vel[i, 1] = 0.0
        body[i] = 0.0
    formation_targets_nb(0.0, 0.0, fverts_r, ftris_r, fplayers_r, foffs_r, 0, -1, ftargets)
    for i in range(11):
        pos[11 + i, 0] = -ftargets[i, 0]
        pos[11 + i, 1] = -ftargets[i, 1]
        vel[11 + i, 0] = 0.0
        vel[11 + i, 1] = 0.0
        body[11 + i] = 180.0
    if kick_side == 0:
        pos[10, 0] = -1.0
        pos[10, 1] = 0.0
    else:
        pos[21, 0] = 1.0
        pos[21, 1] = 0.0


@njit(cache=True, nogil=True)
def run_match_nb(
    sp, tp_l, tp_r,
    rt_l, rv_l, rc_l, rt_r, rv_r, rc_r,
    fverts_l, ftris_l, fplayers_l, foffs_l,
    fverts_r, ftris_r, fplayers_r, foffs_r,
    seed, total_cycles, half_cycles,
    collect, trace_ball, trace_players, trace_misc, stats, dbg,
):
    """Play a full match; returns (score_left, score_right, status).

    status 0 = ok, 1 = numeric failure (never a partial result).
    ``stats`` collects counters: 0 holder plans, 1 executed kicks,
    2 offside restarts, 3 out-of-bounds restarts, 4 intercept loop
    iterations, 5 pass-enum calls."""
    kickable = sp[SP_KICKABLE]
    kick2 = kickable * kickable
    max_dash = sp[SP_MAX_DASH]

    pos = np.empty((22, 2))
    vel = np.zeros((22, 2))
    body = np.zeros(22)
    stamina = np.full(22, sp[SP_STAMINA_MAX])
    ball = np.zeros(2)
    bvel = np.zeros(2)
    consumed = np.zeros(22)

    table = np.empty(HORIZON + 1)
    dash_table(sp, table)
    pred = np.empty((HORIZON + 1, 2))
    icept = np.full(22, 10, dtype=np.int64)

    ftargets = np.empty((11, 2))
    mypos = np.empty((11, 2))
    mybody = np.empty(11)
    opps = np.empty((11, 2))
    obody = np.empty(11)
    my_icept = np.empty(11, dtype=np.int64)
    feats = np.empty(NFEAT)

    cand = np.empty((2, MAXC, 2))
    ncand = np.zeros(2, dtype=np.int64)
    top_pts = np.empty((2, 3, 2))
    ntop = np.zeros(2, dtype=np.int64)
    bp_cache = np.empty((2, 2))
    bp_cache[0, 0] = 52.5
    bp_cache[0, 1] = 0.0
    bp_cache[1, 0] = 52.5
    bp_cache[1, 1] = 0.0
    vor_cycle = np.full(2, -10_000, dtype=np.int64)
    vor_line = np.full(2, -1e9)
    top_idx = np.empty(3, dtype=np.int64)

    node_score = np.empty(MAXN)
    node_after = np.empty((MAXN, 2))
    node_dir = np.empty(MAXN)
    node_power = np.empty(MAXN)
    node_recv = np.empty(MAXN, dtype=np.int64)
    node_term = np.empty(MAXN, dtype=np.int64)
    scratch_score = np.empty(MAXN)
    scratch_after = np.empty((MAXN, 2))
    scratch_dir = np.empty(MAXN)
    scratch_power = np.empty(MAXN)
    scratch_recv = np.empty(MAXN, dtype=np.int64)
    scratch_term = np.empty(MAXN, dtype=np.int64)
    mypos2 = np.empty((11, 2))
    trig = np.empty((4, 11))
    lbs = np.empty(11)

    acts_kind = np.zeros(22, dtype=np.int64)
    acts_a = np.zeros(22)
    acts_b = np.zeros(22)

    # Holder plans are reused for a couple of cycles while the same player
    # keeps the ball; replanning every cycle adds nothing but cost.
    plan_cycle = np.full(2, -10_000, dtype=np.int64)
    plan_kicker = np.full(2, -1, dtype=np.int64)
    plan_power = np.zeros(2)
    plan_dir = np.zeros(2)
    ftri_hint = np.full((2, 4), -1, dtype=np.int64)

    rng_state = _U64(seed) * _U64(2654435761) + _U64(0x9E3779B97F4A7C15)
    ball_moved = True

    score_l = 0
    score_r = 0
    mode = MODE_KICKOFF
    pending_kick = 0
    last_touch = 0

    # Offside bookkeeping: players of the kicking side standing beyond the
    # offside line at kick time are flagged; if one of them is the next to
    # touch the ball, play restarts for the defenders.
    off_flags = np.zeros(22, dtype=np.int64)
    off_side = -1

    reset_kickoff_nb(0, pos, vel, body, ball, bvel,
                     fverts_l, ftris_l, fplayers_l, foffs_l,
                     fverts_r, ftris_r, fplayers_r, foffs_r, ftargets)

    for cycle in range(total_cycles):
        if cycle == half_cycles:
            reset_kickoff_nb(1, pos, vel, body, ball, bvel,
                             fverts_l, ftris_l, fplayers_l, foffs_l,
                             fverts_r, ftris_r, fplayers_r, foffs_r, ftargets)
            for i in range(22):
                stamina[i] = sp[SP_STAMINA_MAX]
            mode = MODE_KICKOFF
            vor_cycle[0] = -10_000
            vor_cycle[1] = -10_000
            plan_cycle[0] = -10_000
            plan_cycle[1] = -10_000
            plan_kicker[0] = -1
            plan_kicker[1] = -1
            off_side = -1
        elif mode == MODE_GOAL:
            reset_kickoff_nb(pending_kick, pos, vel, body, ball, bvel,
                             fverts_l, ftris_l, fplayers_l, foffs_l,
                             fverts_r, ftris_r, fplayers_r, foffs_r, ftargets)
            mode = MODE_KICKOFF
            vor_cycle[0] = -10_000
            vor_cycle[1] = -10_000
            plan_cycle[0] = -10_000
            plan_cycle[1] = -10_000
            plan_kicker[0] = -1
            plan_kicker[1] = -1
            off_side = -1

        # --- observations -------------------------------------------------
        def_l, def_r = offside_lines(pos)
        off_l = ball[0]
        if def_l > off_l:
            off_l = def_l
        if off_l < 0.0:
            off_l = 0.0
        off_r = -ball[0]
        if def_r > off_r:
            off_r = def_r
        if off_r < 0.0:
            off_r = 0.0

        if dbg[1] == 0 and ((cycle & 1) == 0 or ball_moved or mode != MODE_PLAY_ON):
            ball_pred_table(ball[0], ball[1], bvel[0], bvel[1], sp[SP_BALL_DECAY], pred)
            for i in range(22):
                icept[i] = intercept_cycles_arr(pos[i, 0], pos[i, 1], body[i], pred, kickable, table)

        # --- decisions ----------------------------------------------------
        for i in range(22):
            acts_kind[i] = 0
            acts_a[i] = 0.0
            acts_b[i] = 0.0

        for side in range(2):
            base = 11 * side
            obase = 11 if side == 0 else 0
            m = 1.0 if side == 0 else -1.0
            brot = 0.0 if side == 0 else 180.0
            tp = tp_l if side == 0 else tp_r
            rt = rt_l if side == 0 else rt_r
            rv = rv_l if side == 0 else rv_r
            rc = rc_l if side == 0 else rc_r
            fverts = fverts_l if side == 0 else fverts_r
            ftris = ftris_l if side == 0 else ftris_r
            fplayers = fplayers_l if side == 0 else fplayers_r
            foffs = foffs_l if side == 0 else foffs_r
            offside = off_l if side == 0 else off_r
            opp_second = def_l if side == 0 else def_r

            for i in range(11):
                gi = base + i
                mypos[i, 0] = m * pos[gi, 0]
                mypos[i, 1] = m * pos[gi, 1]
                mybody[i] = norm180(body[gi] + brot)
                my_icept[i] = icept[gi]
                ogi = obase + i
                opps[i, 0] = m * pos[ogi, 0]
                opps[i, 1] = m * pos[ogi, 1]
                obody[i] = norm180(body[ogi] + brot)
            ball_lx = m * ball[0]
            ball_ly = m * ball[1]

            min1 = SENTINEL + 1
            min2 = SENTINEL + 1
            argmin = -1
            for i in range(11):
                v = my_icept[i]
                if v < min1:
                    min2 = min1
                    min1 = v
                    argmin = i
                elif v < min2:
                    min2 = v
            opp_min = SENTINEL + 1
            for i in range(11):
                if icept[obase + i] < opp_min:
                    opp_min = icept[obase + i]

            own_kick_count = 0
            kicker = -1
            kicker_d2 = 1e18
            for i in range(11):
                gi = base + i
                dx = pos[gi, 0] - ball[0]
                dy = pos[gi, 1] - ball[1]
                d2 = dx * dx + dy * dy
                if d2 <= kick2:
                    own_kick_count += 1
                    if d2 < kicker_d2:
                        kicker_d2 = d2
                        kicker = i

            profile = 0
            if mode != MODE_KICKOFF:
                profile = 2 if min1 <= opp_min else 1
            if dbg[2] == 0:
                ftri_hint[side, profile] = formation_targets_nb(
                    ball_lx, ball_ly, fverts, ftris, fplayers, foffs, profile,
                    ftri_hint[side, profile], ftargets,
                )

            use_pos = tp[TP_USE_POSITIONING] >= 0.5
            use_eval_team = tp[TP_USE_EVAL] >= 0.5
            if use_pos or use_eval_team:
                if cycle - vor_cycle[side] >= VOR_REFRESH or abs(offside - vor_line[side]) > 2.0:
                    n_c = voronoi_candidates_nb(opps, offside, ball_lx - 5.0, cand[side])
                    ncand[side] = n_c
                    vor_cycle[side] = cycle
                    vor_line[side] = offside
                    bx, by = pick_best_point_nb(cand[side], n_c, opps, mypos)
                    bp_cache[side, 0] = bx
                    bp_cache[side, 1] = by
                    k = top3_candidates_nb(cand[side], n_c, opps, mypos, top_idx)
                    ntop[side] = k
                    for t in range(k):
                        top_pts[side, t, 0] = cand[side][top_idx[t], 0]
                        top_pts[side, t, 1] = cand[side][top_idx[t], 1]

            if use_pos and ntop[side] > 0 and profile == 2:
                k = int(ntop[side])
                need = 3 if k >= 3 else k
                best_cost = 1e18
                ba0 = -1
                ba1 = -1
                ba2 = -1
                for a0 in range(-1, k):
                    for a1 in range(-1, k):
                        for a2 in range(-1, k):
                            if a0 >= 0 and (a0 == a1 or a0 == a2):
                                continue
                            if a1 >= 0 and a1 == a2:
                                continue
                            assigned = 0
                            if a0 >= 0:
                                assigned += 1
                            if a1 >= 0:
                                assigned += 1
                            if a2 >= 0:
                                assigned += 1
                            if assigned != need:
                                continue
                            cost = 0.0
                            if a0 >= 0:
                                dx = top_pts[side, a0, 0] - ftargets[8, 0]
                                dy = top_pts[side, a0, 1] - ftargets[8, 1]
                                cost += math.sqrt(dx * dx + dy * dy)
                            if a1 >= 0:
                                dx = top_pts[side, a1, 0] - ftargets[9, 0]
                                dy = top_pts[side, a1, 1] - ftargets[9, 1]
                                cost += math.sqrt(dx * dx + dy * dy)
                            if a2 >= 0:
                                dx = top_pts[side, a2, 0] - ftargets[10, 0]
                                dy = top_pts[side, a2, 1] - ftargets[10, 1]
                                cost += math.sqrt(dx * dx + dy * dy)
                            if cost < best_cost - 1e-12:
                                best_cost = cost
                                ba0 = a0
                                ba1 = a1
                                ba2 = a2
                if ba0 >= 0:
                    ftargets[8, 0] = top_pts[side, ba0, 0]
                    ftargets[8, 1] = top_pts[side, ba0, 1]
                if ba1 >= 0:
                    ftargets[9, 0] = top_pts[side, ba1, 0]
                    ftargets[9, 1] = top_pts[side, ba1, 1]
                if ba2 >= 0:
                    ftargets[10, 0] = top_pts[side, ba2, 0]
                    ftargets[10, 1] = top_pts[side, ba2, 1]

            for i in range(11):
                gi = base + i
                role = i + 1
                self_min = my_icept[i]
                mate_min = min2 if argmin == i else min1
                feats[FEAT_BALL_X] = ball_lx
                feats[FEAT_BALL_Y] = ball_ly
                feats[FEAT_ABS_BALL_Y] = abs(ball_ly)
                feats[FEAT_SELF_X] = mypos[i, 0]
                feats[FEAT_SELF_Y] = mypos[i, 1]
                feats[FEAT_ROLE] = float(role)
                feats[FEAT_OFFSIDE_GAP] = offside - mypos[i, 0]
                feats[FEAT_INTERCEPT_MARGIN] = float(mate_min - opp_min)
                feats[FEAT_SELF_MIN] = float(self_min)

                dxb = pos[gi, 0] - ball[0]
                dyb = pos[gi, 1] - ball[1]
                d2b = dxb * dxb + dyb * dyb
                self_kickable = d2b <= kick2
                teammate_kickable = own_kick_count - (1 if self_kickable else 0) > 0

                if i == kicker:
                    if dbg[0] == 1:
                        acts_kind[gi] = 3
                        acts_a[gi] = max_dash
                        acts_b[gi] = norm180(bearing(m * 52.5 - ball[0], 0.0 - ball[1]))
                        continue
                    if plan_kicker[side] == i and cycle - plan_cycle[side] < 16:
                        acts_kind[gi] = 3
                        acts_a[gi] = plan_power[side]
                        acts_b[gi] = norm180(plan_dir[side] + brot)
                        continue
                    stats[0] += 1
                    opp_forward = sector_count_nb(mypos[i, 0], mypos[i, 1], opps, 0)
                    use_eval = rule_value(tp, rt, rv, rc, feats, TP_USE_EVAL)
                    power, direction = holder_action_nb(
                        mypos, mybody, opps, obody, 0, opp_second,
                        i, ball_lx, ball_ly, offside,
                        rule_value(tp, rt, rv, rc, feats, TP_RISK_T),
                        rule_value(tp, rt, rv, rc, feats, TP_RISK_L),
                        rule_value(tp, rt, rv, rc, feats, TP_RISK_D),
                        rule_value(tp, rt, rv, rc, feats, TP_OPP_STEP_RISK),
                        rule_value(tp, rt, rv, rc, feats, TP_PASS_MAX_X),
                        rule_value(tp, rt, rv, rc, feats, TP_PASS_MIN_Y),
                        rule_value(tp, rt, rv, rc, feats, TP_PASS_CUT),
                        rule_value(tp, rt, rv, rc, feats, TP_PASS_ANGLE),
                        rule_value(tp, rt, rv, rc, feats, TP_PASS_DEPTH),
                        opp_forward, bp_cache[side, 0], bp_cache[side, 1],
                        rule_value(tp, rt, rv, rc, feats, TP_EVAL_DEPTH),
                        rule_value(tp, rt, rv, rc, feats, TP_EVAL_W_FAR),
                        rule_value(tp, rt, rv, rc, feats, TP_EVAL_W_NEAR),
                        rule_value(tp, rt, rv, rc, feats, TP_EVAL_BONUS),
                        use_eval,
                        sp, table, trig, lbs,
                        node_score, node_after, node_dir, node_power, node_recv, node_term,
                        scratch_score, scratch_after, scratch_dir, scratch_power,
                        scratch_recv, scratch_term, mypos2,
                    )
                    plan_cycle[side] = cycle
                    plan_kicker[side] = i
                    plan_power[side] = power
                    plan_dir[side] = direction
                    acts_kind[gi] = 3
                    acts_a[gi] = power
                    acts_b[gi] = norm180(direction + brot)
                    continue

                pressing = pressing_value(tp, rt, rv, rc, feats, ball_lx, ball_ly, mypos[i, 0], role)
                press = should_press_nb(self_min, mate_min, opp_min, pressing, teammate_kickable)

                if i == 0 and not (press and ball_lx < -36.0 and abs(ball_ly) < 20.0):
                    tx = -50.5
                    ty = ball_ly * 0.55
                    if ty > 6.0:
                        ty = 6.0
                    elif ty < -6.0:
                        ty = -6.0
                    desired_power = 0.85 * max_dash
                elif press:
                    idx = self_min if self_min < HORIZON else HORIZON
                    tx = m * pred[idx, 0]
                    ty = m * pred[idx, 1]
                    desired_power = max_dash
                else:
                    tx = ftargets[i, 0]
                    ty = ftargets[i, 1]
                    # forwards hold the offside line while the team attacks
                    if i >= 8 and profile == 2:
                        high = offside - 1.0
                        if tx < high:
                            tx = high
                    # everyone stays onside when positioning
                    if tx > offside - 0.2:
                        tx = offside - 0.2
                    desired_power = dash_power_nb(
                        rule_value(tp, rt, rv, rc, feats, TP_USE_R1),
                        rule_value(tp, rt, rv, rc, feats, TP_USE_R2),
                        rule_value(tp, rt, rv, rc, feats, TP_USE_R3),
                        rule_value(tp, rt, rv, rc, feats, TP_USE_R4),
                        ball_lx, mypos[i, 0], offside, role,
                        mate_min, opp_min, stamina[gi], math.sqrt(d2b), sp,
                    )

                dx = tx - mypos[i, 0]
                dy = ty - mypos[i, 1]
                d = math.sqrt(dx * dx + dy * dy)
                if d < 0.3:
                    continue
                ang = bearing(dx, dy)
                diff = norm180(ang - mybody[i])
                if abs(diff) > TURN_ALIGN:
                    acts_kind[gi] = 2
                    acts_b[gi] = diff
                else:
                    if not press and d < 6.0:
                        # taper the final approach; hovering at a target
                        # should not burn sprint stamina
                        scale = d / 6.0
                        if scale < 0.25:
                            scale = 0.25
                        desired_power *= scale
                    acts_kind[gi] = 1
                    acts_a[gi] = desired_power

        # --- physics -------------------------------------------------------
        kick_vx = 0.0
        kick_vy = 0.0
        kicked = False
        kicker_idx = -1
        offside_trip = False
        for i in range(22):
            consumed[i] = 0.0
            k = acts_kind[i]
            if k == 1:
                power = acts_a[i]
                if power > max_dash:
                    power = max_dash
                elif power < -max_dash:
                    power = -max_dash
                if stamina[i] < sp[SP_RECOVER_THR] * sp[SP_STAMINA_MAX]:
                    cap = sp[SP_STAMINA_INC]
                    if power > cap:
                        power = cap
                    elif power < -cap:
                        power = -cap
                mag = abs(power)
                if mag > stamina[i]:
                    mag = stamina[i]
                eff = mag if power >= 0.0 else -mag
                consumed[i] = mag
                rad = math.radians(body[i])
                nvx = vel[i, 0] + eff * sp[SP_DASH_RATE] * math.cos(rad)
                nvy = vel[i, 1] + eff * sp[SP_DASH_RATE] * math.sin(rad)
                speed = math.sqrt(nvx * nvx + nvy * nvy)
                if speed > sp[SP_MAX_PSPEED]:
                    scale = sp[SP_MAX_PSPEED] / speed
                    nvx *= scale
                    nvy *= scale
                vel[i, 0] = nvx
                vel[i, 1] = nvy
            elif k == 2:
                moment = acts_b[i]
                if moment > sp[SP_MAX_TURN]:
                    moment = sp[SP_MAX_TURN]
                elif moment < -sp[SP_MAX_TURN]:
                    moment = -sp[SP_MAX_TURN]
                body[i] = norm180(body[i] + moment)
            elif k == 3:
                dx = pos[i, 0] - ball[0]
                dy = pos[i, 1] - ball[1]
                if dx * dx + dy * dy <= kick2:
                    rng_state, u = rng_next(rng_state)
                    jitter = (2.0 * u - 1.0) * sp[SP_KICK_NOISE]
                    rad = math.radians(acts_b[i]) + jitter
                    power = acts_a[i]
                    if power < 0.0:
                        power = 0.0
                    elif power > max_dash:
                        power = max_dash
                    speed = power * sp[SP_KICK_RATE]
                    kick_vx += speed * math.cos(rad)
                    kick_vy += speed * math.sin(rad)
                    kicked = True
                    stats[1] += 1
                    kicker_idx = i
                    side_i = 0 if i < 11 else 1
                    if off_side == side_i and off_flags[i] == 1:
                        offside_trip = True
                    last_touch = side_i

        if kicked:
            speed = math.sqrt(kick_vx * kick_vx + kick_vy * kick_vy)
            if speed > sp[SP_MAX_BSPEED]:
                scale = sp[SP_MAX_BSPEED] / speed
                kick_vx *= scale
                kick_vy *= scale
            bvel[0] = kick_vx
            bvel[1] = kick_vy
            if not offside_trip:
                # new possession context: flag the kicker's teammates who
                # were beyond their offside line when the ball left
                off_side = last_touch
                line = off_l if off_side == 0 else off_r
                mm = 1.0 if off_side == 0 else -1.0
                kbase = 11 * off_side
                for q in range(11):
                    gq = kbase + q
                    if mm * pos[gq, 0] > line + 0.1 and gq != kicker_idx:
                        off_flags[gq] = 1
                    else:
                        off_flags[gq] = 0

        ball_moved = kicked
        ball[0] += bvel[0]
        ball[1] += bvel[1]
        bvel[0] *= sp[SP_BALL_DECAY]
        bvel[1] *= sp[SP_BALL_DECAY]
        for i in range(22):
            pos[i, 0] += vel[i, 0]
            pos[i, 1] += vel[i, 1]
            vel[i, 0] *= sp[SP_PLAYER_DECAY]
            vel[i, 1] *= sp[SP_PLAYER_DECAY]

        min_sep = 2.0 * sp[SP_PLAYER_RADIUS]
        for i in range(0 if dbg[3] == 0 else 22, 22):
            for j in range(i + 1, 22):
                dx = pos[j, 0] - pos[i, 0]
                dy = pos[j, 1] - pos[i, 1]
                d2 = dx * dx + dy * dy
                if d2 < min_sep * min_sep:
                    d = math.sqrt(d2)
                    if d < 1e-9:
                        ax = 1.0
                        ay = 0.0
                    else:
                        ax = dx / d
                        ay = dy / d
                    push = 0.5 * (min_sep - d)
                    pos[i, 0] -= ax * push
                    pos[i, 1] -= ay * push
                    pos[j, 0] += ax * push
                    pos[j, 1] += ay * push

        for i in range(22):
            s = stamina[i] - consumed[i] + sp[SP_STAMINA_INC]
            if s < 0.0:
                s = 0.0
            elif s > sp[SP_STAMINA_MAX]:
                s = sp[SP_STAMINA_MAX]
            stamina[i] = s

        if not (math.isfinite(ball[0]) and math.isfinite(ball[1])):
            return score_l, score_r, 1

        # proximity touches resolve pending offside flags (kick cycles are
        # handled at kick resolution; the ball has just left the kicker)
        if not kicked and off_side >= 0:
            toucher = -1
            toucher_d2 = 1e18
            for i in range(22):
                dx = pos[i, 0] - ball[0]
                dy = pos[i, 1] - ball[1]
                d2 = dx * dx + dy * dy
                if d2 <= kick2 and d2 < toucher_d2:
                    toucher_d2 = d2
                    toucher = i
            if toucher >= 0:
                t_side = 0 if toucher < 11 else 1
                if t_side == off_side and off_flags[toucher] == 1:
                    offside_trip = True
                else:
                    off_side = -1
                last_touch = t_side

        mode = MODE_PLAY_ON
        if offside_trip:
            mode = MODE_OUT
            stats[2] += 1
            receiving = 1 - off_side if off_side >= 0 else 1 - last_touch
            off_side = -1
            do_restart_nb(receiving, pos, vel, body, ball, bvel)
        elif abs(ball[0]) > 52.5 and abs(ball[1]) < sp[SP_GOAL_HALF]:
            if ball[0] > 0.0:
                score_l += 1
                pending_kick = 1
            else:
                score_r += 1
                pending_kick = 0
            mode = MODE_GOAL
            off_side = -1
        elif abs(ball[0]) > 52.5 or abs(ball[1]) > 34.0:
            mode = MODE_OUT
            stats[3] += 1
            off_side = -1
            do_restart_nb(1 - last_touch, pos, vel, body, ball, bvel)

        if collect == 1:
            trace_ball[cycle, 0] = ball[0]
            trace_ball[cycle, 1] = ball[1]
            trace_ball[cycle, 2] = bvel[0]
            trace_ball[cycle, 3] = bvel[1]
            for i in range(22):
                trace_players[cycle, i, 0] = pos[i, 0]
                trace_players[cycle, i, 1] = pos[i, 1]
                trace_players[cycle, i, 2] = body[i]
                trace_players[cycle, i, 3] = stamina[i]
            trace_misc[cycle, 0] = float(mode)
            trace_misc[cycle, 1] = float(score_l)
            trace_misc[cycle, 2] = float(score_r)
            trace_misc[cycle, 3] = float(last_touch)

    return score_l, score_r, 0


# ---------------------------------------------------------------------------
# Python-side builders (not compiled)


def build_server_vector(server) -> np.ndarray:
    sp = np.zeros(NSP)
    sp[SP_MAX_DASH] = server.max_dash_power
    sp[SP_DASH_RATE] = server.dash_power_rate
    sp[SP_PLAYER_DECAY] = server.player_decay
    sp[SP_BALL_DECAY] = server.ball_decay
    sp[SP_MAX_PSPEED] = server.max_player_speed
    sp[SP_MAX_BSPEED] = server.max_ball_speed
    sp[SP_KICKABLE] = server.kickable_area
    sp[SP_PLAYER_RADIUS] = server.player_radius
    sp[SP_STAMINA_MAX] = server.stamina_max
    sp[SP_STAMINA_INC] = server.stamina_inc_per_cycle
    sp[SP_MAX_TURN] = server.max_turn_moment
    sp[SP_GOAL_HALF] = server.goal_half_width
    sp[SP_KICK_RATE] = server.kick_power_rate
    sp[SP_KICK_NOISE] = server.kick_dir_noise
    sp[SP_RECOVER_THR] = server.recover_dec_threshold
    return sp


def _resolve_risk(params, pass_type: str, opponent_name: str) -> float:
    for (ptype, sub), value in params.risk_table.items():
        if ptype not in ("*", pass_type):
            continue
        if sub == "*" or sub in opponent_name:
            return float(value)
    return 0.0


def build_team_vector(params, opponent_name: str) -> np.ndarray:
    """Flatten an activated BehaviorParams bundle for one match.

    Name-gated lookups (pressing table, risk tables) are resolved here,
    since the opponent is fixed for the whole match.  With risky passes
    disabled every risk grant is zero, which reproduces the baseline
    passing behavior exactly.
    """
    tp = np.zeros(NTP)
    tp[TP_PRESS_DEFAULT] = params.pressing_default
    tp[TP_PRESS_MID] = params.pressing_mid
    tp[TP_PRESS_FLANK] = params.pressing_flank_def
    tp[TP_PRESS_NAMED] = -1.0
    for name, value in params.pressing_vs_named.items():
        if name in opponent_name:
            tp[TP_PRESS_NAMED] = float(value)
            break
    tp[TP_EVAL_DEPTH] = params.eval_depth
    tp[TP_EVAL_W_FAR] = params.eval_weight_far
    tp[TP_EVAL_W_NEAR] = params.eval_weight_near
    tp[TP_EVAL_BONUS] = params.eval_bonus_scale
    if params.use_risky_passes:
        tp[TP_RISK_T] = _resolve_risk(params, "T", opponent_name)
        tp[TP_RISK_L] = _resolve_risk(params, "L", opponent_name)
        tp[TP_RISK_D] = _resolve_risk(params, "D", opponent_name)
        risk = params.opp_step_risk_default
        for name, value in params.opp_step_risk_vs_named.items():
            if name in opponent_name:
                risk = value
                break
        tp[TP_OPP_STEP_RISK] = float(risk)
    tp[TP_PASS_MAX_X] = params.pass_max_x
    tp[TP_PASS_MIN_Y] = params.pass_min_y
    tp[TP_PASS_CUT] = params.pass_cut
    tp[TP_PASS_ANGLE] = params.pass_angle
    tp[TP_PASS_DEPTH] = params.pass_depth
    tp[TP_USE_R1] = 1.0 if params.use_dash_rule_offside else 0.0
    tp[TP_USE_R2] = 1.0 if params.use_dash_rule_defenders else 0.0
    tp[TP_USE_R3] = 1.0 if params.use_dash_rule_midfielders else 0.0
    tp[TP_USE_R4] = 1.0 if params.use_dash_rule_opp_area else 0.0
    tp[TP_USE_PRESSING] = 1.0 if params.use_pressing_scheme else 0.0
    tp[TP_USE_EVAL] = 1.0 if params.use_action_evaluator else 0.0
    tp[TP_USE_POSITIONING] = 1.0 if params.use_voronoi_positioning else 0.0
    tp[TP_USE_RISK] = 1.0 if params.use_risky_passes else 0.0
    tp[TP_BASE_PRESSING] = 3.0
    return tp


RULE_TARGETS = {
    "pressing_default": TP_PRESS_DEFAULT,
    "pressing_mid": TP_PRESS_MID,
    "pressing_flank_def": TP_PRESS_FLANK,
    "eval_depth": TP_EVAL_DEPTH,
    "eval_weight_far": TP_EVAL_W_FAR,
    "eval_weight_near": TP_EVAL_W_NEAR,
    "eval_bonus_scale": TP_EVAL_BONUS,
    "opp_step_risk_default": TP_OPP_STEP_RISK,
    "pass_max_x": TP_PASS_MAX_X,
    "pass_min_y": TP_PASS_MIN_Y,
    "pass_cut": TP_PASS_CUT,
    "pass_angle": TP_PASS_ANGLE,
    "pass_depth": TP_PASS_DEPTH,
    "use_dash_rule_offside": TP_USE_R1,
    "use_dash_rule_defenders": TP_USE_R2,
    "use_dash_rule_midfielders": TP_USE_R3,
    "use_dash_rule_opp_area": TP_USE_R4,
    "use_pressing_scheme": TP_USE_PRESSING,
    "use_action_evaluator": TP_USE_EVAL,
    "use_voronoi_positioning": TP_USE_POSITIONING,
    "use_risky_passes": TP_USE_RISK,
}

MAX_RULE_CONDS = 4


def build_rule_arrays(rules) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Conditional design points as flat arrays for the kernel.

    Only scalar parameter targets are supported at runtime; name-gated map
    entries are resolved at activation and cannot be condition targets.
    """
    from .hbec import CONDITION_FEATURES, CONDITION_OPS

    feature_ids = {name: i for i, name in enumerate(CONDITION_FEATURES)}
    n = len(rules)
    targets = np.zeros(n, dtype=np.int64)
    values = np.zeros(n)
    conds = np.full((n, MAX_RULE_CONDS, 3), -1.0)
    for r, point in enumerate(rules):
        if point.action_key not in RULE_TARGETS:
            raise ValueError(
                f"conditional design point {point.id!r} targets {point.action_key!r}; "
                "only scalar parameters can be overridden at runtime"
            )
        if len(point.conditions) > MAX_RULE_CONDS:
            raise ValueError(f"design point {point.id!r} has too many conditions")
        targets[r] = RULE_TARGETS[point.action_key]
        values[r] = point.action_value
        for c, cond in enumerate(point.conditions):
            conds[r, c, 0] = float(feature_ids[cond.argument])
            conds[r, c, 1] = float(CONDITION_OPS.index(cond.op))
            conds[r, c, 2] = cond.threshold
    return targets, values, conds


def build_formation_pack(formation_set) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Concatenate the four play-mode profiles into kernel arrays."""
    from .formation import PROFILES

    verts: list[list[float]] = []
    tris: list[list[int]] = []
    players: list = []
    offsets = np.zeros((4, 4), dtype=np.int64)
    for p_idx, profile in enumerate(PROFILES):
        form = formation_set.get(profile)
        v_off = len(verts)
        t_off = len(tris)
        for vertex in form.vertices:
            verts.append([vertex.ball.x, vertex.ball.y])
            players.append([[pt.x, pt.y] for pt in vertex.players])
        for tri in form.triangulation.triangles:
            tris.append(list(tri))
        offsets[p_idx, 0] = v_off
        offsets[p_idx, 1] = len(form.vertices)
        offsets[p_idx, 2] = t_off
        offsets[p_idx, 3] = len(form.triangulation.triangles)
    return (
        np.array(verts, dtype=np.float64),
        np.array(tris, dtype=np.int64),
        np.array(players, dtype=np.float64),
        offsets,
    )
