use super::{Func, Node};

fn is_const(n: &Node, v: f64) -> bool {
    matches!(n, Node::Const(c) if *c == v)
}

fn add(a: Node, b: Node) -> Node {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        (Node::Const(x), Node::Const(y)) => Node::Const(x + y),
        _ => Node::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Node, b: Node) -> Node {
    match (&a, &b) {
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        (Node::Const(x), Node::Const(y)) => Node::Const(x - y),
        _ => Node::Sub(Box::new(a), Box::new(b)),
    }
}

fn neg(a: Node) -> Node {
    match a {
        Node::Const(0.0) => Node::Const(0.0),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn mul(a: Node, b: Node) -> Node {
    match (&a, &b) {
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Node::Const(0.0),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        (Node::Const(x), Node::Const(y)) => Node::Const(x * y),
        _ => Node::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Node, b: Node) -> Node {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => Node::Const(0.0),
        _ if is_const(&b, 1.0) => a,
        _ => Node::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Node, e: i32) -> Node {
    match e {
        0 => Node::Const(1.0),
        1 => a,
        _ => Node::Pow(Box::new(a), e),
    }
}

pub(super) fn derivative(n: &Node) -> Node {
    match n {
        Node::Var => Node::Const(1.0),
        Node::Const(_) => Node::Const(0.0),
        Node::Neg(a) => neg(derivative(a)),
        Node::Add(a, b) => add(derivative(a), derivative(b)),
        Node::Sub(a, b) => sub(derivative(a), derivative(b)),
        Node::Mul(a, b) => add(
            mul(derivative(a), (**b).clone()),
            mul((**a).clone(), derivative(b)),
        ),
        Node::Div(a, b) => {
            let da = derivative(a);
            let db = derivative(b);
            if is_const(&db, 0.0) {
                div(da, (**b).clone())
            } else {
                div(
                    sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    pow((**b).clone(), 2),
                )
            }
        }
        Node::Pow(a, e) => mul(
            mul(Node::Const(*e as f64), pow((**a).clone(), e - 1)),
            derivative(a),
        ),
        Node::Call(func, a) => {
            let inner = derivative(a);
            let outer = match func {
                Func::Sin => Node::Call(Func::Cos, a.clone()),
                Func::Cos => neg(Node::Call(Func::Sin, a.clone())),
                Func::Exp => Node::Call(Func::Exp, a.clone()),
                Func::Sqrt => div(
                    Node::Const(1.0),
                    mul(Node::Const(2.0), Node::Call(Func::Sqrt, a.clone())),
                ),
            };
            mul(outer, inner)
        }
    }
}
