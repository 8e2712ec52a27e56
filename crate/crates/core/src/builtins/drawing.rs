//! Drawing elements and global drawing settings.

use super::{arg, arg_bool, arg_int, arg_real, arg_str, ExecCtx};
use crate::canvas::{Attribute, Orientation, Point, SettingChange};
use crate::vm::{OpError, Value};

type OpResult = Result<Option<Value>, OpError>;

fn attr(args: &[Value], i: usize) -> Result<Attribute, OpError> {
    arg(args, i)?.to_attribute()
}

fn point(args: &[Value], i: usize) -> Result<Point, OpError> {
    arg(args, i)?.to_point()
}

fn xy(args: &[Value], i: usize) -> Result<Point, OpError> {
    Ok(Point::new(arg_real(args, i)?, arg_real(args, i + 1)?))
}

fn id(v: u32) -> OpResult {
    Ok(Some(Value::Int(v as i64)))
}

pub(super) fn global_attr(ctx: &mut ExecCtx<'_>, _: &[Value]) -> OpResult {
    Ok(Some(Value::attribute(ctx.canvas.get_global_attr())))
}

pub(super) fn set_attr(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.canvas.set_attr(attr(args, 0)?);
    Ok(None)
}

pub(super) fn segment(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.add_segment(attr(args, 0)?, xy(args, 1)?, xy(args, 3)?)?)
}

pub(super) fn rectangle(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.add_rectangle(
        attr(args, 0)?,
        xy(args, 1)?,
        arg_real(args, 3)?,
        arg_real(args, 4)?,
    )?)
}

pub(super) fn arc(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.add_arc(
        attr(args, 0)?,
        xy(args, 1)?,
        arg_real(args, 3)?,
        arg_real(args, 4)?,
        arg_real(args, 5)?,
    )?)
}

fn setting(ctx: &mut ExecCtx<'_>, change: SettingChange) -> OpResult {
    ctx.canvas.set_dim_setting(change)?;
    Ok(None)
}

pub(super) fn dim_leaders(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(ctx, SettingChange::DimLeaders(arg_bool(args, 0)?))
}

pub(super) fn dim_precision(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(ctx, SettingChange::DimPrecision(arg_int(args, 0)?))
}

pub(super) fn dim_extension(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(
        ctx,
        SettingChange::DimExtension {
            gap: arg_real(args, 0)?,
            extension: arg_real(args, 1)?,
            overhang: arg_real(args, 2)?,
        },
    )
}

pub(super) fn dim_font(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(
        ctx,
        SettingChange::DimFont {
            height: arg_real(args, 0)?,
            slant: arg_real(args, 1)?,
            width_factor: arg_real(args, 2)?,
        },
    )
}

pub(super) fn dim_arrows(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(
        ctx,
        SettingChange::DimArrows {
            len1: arg_real(args, 0)?,
            ratio1: arg_real(args, 1)?,
            len2: arg_real(args, 2)?,
            ratio2: arg_real(args, 3)?,
        },
    )
}

fn linear_dim(ctx: &mut ExecCtx<'_>, args: &[Value], o: Orientation) -> OpResult {
    id(ctx.canvas.add_linear_dim(
        attr(args, 0)?,
        o,
        point(args, 1)?,
        point(args, 2)?,
        arg_real(args, 3)?,
    )?)
}

pub(super) fn horizontal_dim(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    linear_dim(ctx, args, Orientation::Horizontal)
}

pub(super) fn vertical_dim(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    linear_dim(ctx, args, Orientation::Vertical)
}

/// Returns the id of the horizontal dimension; the vertical one is next.
pub(super) fn dim_frame(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    let (h, _) = ctx.canvas.add_dim_frame(
        attr(args, 0)?,
        xy(args, 1)?,
        arg_real(args, 3)?,
        arg_real(args, 4)?,
        arg_real(args, 5)?,
    )?;
    id(h)
}

pub(super) fn text_leader(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(ctx, SettingChange::TextLeader(arg_bool(args, 0)?))
}

pub(super) fn text_font(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    setting(
        ctx,
        SettingChange::TextFont {
            height: arg_real(args, 0)?,
            slant: arg_real(args, 1)?,
            width_factor: arg_real(args, 2)?,
            line_step: arg_real(args, 3)?,
        },
    )
}

pub(super) fn string_width(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    Ok(Some(Value::Real(ctx.canvas.string_width(arg_str(args, 0)?))))
}

pub(super) fn begin_text(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.canvas.begin_text(arg_str(args, 0)?);
    Ok(None)
}

pub(super) fn append_line(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.canvas.append_line(arg_str(args, 0)?)?;
    Ok(None)
}

pub(super) fn commit_text(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.commit_text(attr(args, 0)?, xy(args, 1)?)?)
}

pub(super) fn height_mark(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx
        .canvas
        .add_height_mark(attr(args, 0)?, point(args, 1)?, arg_str(args, 2)?)?)
}

pub(super) fn pipe_break(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.add_pipe_break(
        attr(args, 0)?,
        point(args, 1)?,
        arg_real(args, 2)?,
        arg_real(args, 3)?,
    )?)
}

pub(super) fn arc_break(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    id(ctx.canvas.add_arc_break(
        attr(args, 0)?,
        point(args, 1)?,
        point(args, 2)?,
        arg_real(args, 3)?,
    )?)
}

pub(super) fn remove(ctx: &mut ExecCtx<'_>, args: &[Value]) -> OpResult {
    ctx.canvas.remove_element(arg_int(args, 0)?)?;
    Ok(None)
}
