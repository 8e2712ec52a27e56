//! Menus, forms, messages and queries.

use std::path::PathBuf;

use super::{arg_bool, arg_int, arg_str, ExecCtx};
use crate::interaction::{FieldBinding, Grid, Placement};
use crate::vm::{OpError, Value};

type OpResult = Result<Option<Value>, OpError>;

pub(super) fn message(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog
        .message(arg_str(args, 0)?, Placement::Center, ctx.interactor)?;
    Ok(None)
}

pub(super) fn information(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog
        .message(arg_str(args, 0)?, Placement::Infobar, ctx.interactor)?;
    Ok(None)
}

pub(super) fn query(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let code = ctx.dialog.query(arg_str(args, 0)?, ctx.interactor)?;
    Ok(Some(Value::Int(code)))
}

pub(super) fn new_menu(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog.new_menu(arg_str(args, 0)?);
    Ok(None)
}

pub(super) fn add_option(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog
        .add_option(arg_str(args, 0)?, arg_int(args, 1)?, arg_bool(args, 2)?)?;
    Ok(None)
}

pub(super) fn add_5_options(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog.add_5_options([
        arg_str(args, 0)?,
        arg_str(args, 1)?,
        arg_str(args, 2)?,
        arg_str(args, 3)?,
        arg_str(args, 4)?,
    ])?;
    Ok(None)
}

pub(super) fn show_menu(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let v = ctx.dialog.show_menu(arg_int(args, 0)?, ctx.interactor)?;
    Ok(Some(Value::Int(v)))
}

pub(super) fn menu_from_file(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let mut path = PathBuf::from(arg_str(args, 0)?);
    if path.is_relative() {
        if let Some(base) = ctx.base_dir {
            path = base.join(path);
        }
    }
    let v = ctx.dialog.menu_from_file(&path, ctx.interactor)?;
    Ok(Some(Value::Int(v)))
}

pub(super) fn option_text(ctx: &mut ExecCtx<'_>, _: &[Value]) -> OpResult {
    Ok(Some(Value::Str(ctx.dialog.option_text()?)))
}

pub(super) fn new_form(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog.new_form(arg_str(args, 0)?);
    Ok(None)
}

pub(super) fn new_field(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog.add_field(
        arg_str(args, 0)?,
        FieldBinding::Variable(arg_str(args, 1)?.to_string()),
        None,
    )?;
    Ok(None)
}

fn grid(args: &[Value], at: usize) -> Result<Grid, OpError> {
    let x = arg_int(args, at)?;
    let y = arg_int(args, at + 1)?;
    if x < 0 || y < 0 {
        return Err(OpError::range(format!("field position ({x}, {y}) is negative")));
    }
    Ok(Grid { x, y })
}

pub(super) fn new_field_xy(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog.add_field(
        arg_str(args, 0)?,
        FieldBinding::Variable(arg_str(args, 1)?.to_string()),
        Some(grid(args, 2)?),
    )?;
    Ok(None)
}

pub(super) fn scale_field(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.dialog
        .add_field(arg_str(args, 0)?, FieldBinding::Scale, Some(grid(args, 1)?))?;
    Ok(None)
}

pub(super) fn editor(ctx: &mut ExecCtx<'_>, _: &[Value]) -> OpResult {
    let accepted = ctx.dialog.run_editor(ctx.vars, ctx.canvas, ctx.interactor)?;
    Ok(Some(Value::Bool(accepted)))
}
